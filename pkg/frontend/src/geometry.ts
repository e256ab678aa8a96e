// Coordinate mapping between the rendered thumbnail and normalized slide
// space, plus the same circle hit test the server uses (native-pixel
// distances, boundary inclusive) so a click resolves identically on both
// sides.

import type { SummaryPoint } from "./types.js";

export interface DisplayRect {
    left: number;
    top: number;
    width: number;
    height: number;
}

export interface NormalizedClick {
    x: number;
    y: number;
}

function clamp01(v: number): number {
    return v < 0 ? 0 : v > 1 ? 1 : v;
}

/** Map a client-space click on the rendered thumbnail to fractions of it. */
export function normalizeClick(
    clientX: number,
    clientY: number,
    rect: DisplayRect,
): NormalizedClick {
    return {
        x: clamp01((clientX - rect.left) / rect.width),
        y: clamp01((clientY - rect.top) / rect.height),
    };
}

/** Inverse of normalizeClick: display pixels for a normalized anchor. */
export function toDisplay(point: NormalizedClick, rect: DisplayRect): { px: number; py: number } {
    return { px: rect.left + point.x * rect.width, py: rect.top + point.y * rect.height };
}

/**
 * Every point whose circle contains the click, input order preserved.
 * Distances are measured in the slide's native pixel space; the circle
 * radius is radiusFrac of the native width; the boundary counts as a hit.
 */
export function hitTest(
    click: NormalizedClick,
    slide: { width: number; height: number },
    points: SummaryPoint[],
    radiusFrac: number,
): SummaryPoint[] {
    const radius = radiusFrac * slide.width;
    return points.filter((p) => {
        const dx = (click.x - p.x) * slide.width;
        const dy = (click.y - p.y) * slide.height;
        return Math.sqrt(dx * dx + dy * dy) <= radius;
    });
}

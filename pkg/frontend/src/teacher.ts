// Teacher dashboard state: heatmap toggle, per-slide flips, and the
// click pop-up. All numbers shown come straight from the summary payload;
// the only client-side computation is the shared circle hit test.

import { hitTest, type NormalizedClick } from "./geometry.js";
import type {
    SlideComment,
    SummaryPoint,
    SummarySlide,
    SummaryStatsPayload,
} from "./types.js";

export const HEATMAP_RADIUS_FRAC = 0.03;

export interface Popup {
    slideIndex: number;
    click: NormalizedClick;
    points: SummaryPoint[];
}

export interface TeacherState {
    heatmapVisible: boolean;
    flipped: readonly number[];
    popup: Popup | null;
}

export function initialState(): TeacherState {
    return { heatmapVisible: true, flipped: [], popup: null };
}

/** The toggle hides or reveals every circle layer at once. */
export function toggleHeatmap(s: TeacherState): TeacherState {
    return { ...s, heatmapVisible: !s.heatmapVisible, popup: null };
}

/** Flip one slide over to its scrollable comment list (and back). */
export function flipSlide(s: TeacherState, slideIndex: number): TeacherState {
    const flipped = s.flipped.includes(slideIndex)
        ? s.flipped.filter((i) => i !== slideIndex)
        : [...s.flipped, slideIndex];
    return { ...s, flipped };
}

export function isFlipped(s: TeacherState, slideIndex: number): boolean {
    return s.flipped.includes(slideIndex);
}

/**
 * Click on the heatmap: pop up the descriptions of every circle containing
 * the click (submission order), or close the pop-up on a miss.
 */
export function clickHeatmap(
    s: TeacherState,
    slide: SummarySlide,
    click: NormalizedClick,
    radiusFrac: number = HEATMAP_RADIUS_FRAC,
): TeacherState {
    if (!s.heatmapVisible) return s;
    const points = hitTest(click, slide, slide.points, radiusFrac);
    if (points.length === 0) return { ...s, popup: null };
    return { ...s, popup: { slideIndex: slide.index, click, points } };
}

export function closePopup(s: TeacherState): TeacherState {
    return { ...s, popup: null };
}

// -- presentation helpers; payload values pass through verbatim --

/** The flipped slide's list: every payload comment for it, order untouched. */
export function commentsForSlide(comments: SlideComment[], slideIndex: number): SlideComment[] {
    return comments.filter((c) => c.slide_index === slideIndex);
}

export function slideCaption(slide: SummarySlide): string {
    const pct = (slide.share * 100).toFixed(1);
    const featured = slide.featured ? "featured, " : "";
    return `Slide ${slide.index} (${featured}${slide.point_count} points, ${pct}%)`;
}

export function statsCaption(stats: SummaryStatsPayload): string {
    const featured = stats.featured_slide === null ? "none" : String(stats.featured_slide);
    return (
        `${stats.card_count} cards · ${stats.point_count} points · ` +
        `featured slide: ${featured}`
    );
}

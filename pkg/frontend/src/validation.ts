// Client-side mirror of the server's card validation, for responsive inline
// feedback before the POST. The server remains authoritative; on 422 its
// violation list replaces whatever this predicted.

import type { LectureMode, SubmitBody, Violation } from "./types.js";

export const MAX_TEXT_LENGTH = 2000;

export function validateSubmitBody(
    body: SubmitBody,
    mode: LectureMode,
    slideCount: number,
): Violation[] {
    const violations: Violation[] = [];
    const add = (code: string, message: string, pointIndex: number | null = null) =>
        violations.push({ code, point_index: pointIndex, message });

    if (body.rating === null) {
        add("MissingRating", "a confusion rating is required");
    }
    if (mode === "spatial") {
        if (body.points.length === 0) {
            add("NoPoints", "at least one muddy point is required");
        }
        body.points.forEach((p, i) => {
            if (p.slide < 1 || p.slide > slideCount) {
                add("BadSlideIndex", `slide ${p.slide} does not exist`, i);
            }
            if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1) {
                add("CoordOutOfRange", `coordinates (${p.x}, ${p.y}) fall outside [0,1]`, i);
            }
            if (p.text.trim() === "") {
                add("EmptyText", "an explanation is required for every point", i);
            } else if (p.text.length > MAX_TEXT_LENGTH) {
                add("TextTooLong", `explanation exceeds ${MAX_TEXT_LENGTH} characters`, i);
            }
        });
    } else {
        const text = body.free_text ?? "";
        if (text.trim() === "") {
            add("EmptyText", "free_text must not be empty");
        } else if (text.length > MAX_TEXT_LENGTH) {
            add("TextTooLong", `free_text exceeds ${MAX_TEXT_LENGTH} characters`);
        }
    }
    return violations;
}

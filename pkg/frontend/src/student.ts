// Student submission state machine. Pure functions over an immutable state
// value; the DOM layer renders whatever this says and feeds events back in.
//
// The flow it encodes: double-click places a circle and opens the
// explanation dialog; Cancel or an empty explanation removes that circle;
// clear-all wipes every circle; the submit button stays disabled until a
// rating is chosen; a 422 keeps all entered state and shows the server's
// violations inline.

import type { RatingLabel, SubmitBody, Violation } from "./types.js";
import { validateSubmitBody } from "./validation.js";

export interface DraftPoint {
    slideIndex: number;
    x: number;
    y: number;
    text: string;
}

export interface PendingPoint {
    slideIndex: number;
    x: number;
    y: number;
}

export interface StudentState {
    mode: "spatial" | "baseline";
    slideCount: number;
    points: readonly DraftPoint[];
    pending: PendingPoint | null;
    rating: RatingLabel | null;
    freeText: string;
    violations: readonly Violation[];
    error: string | null;
    submitting: boolean;
    submittedCardId: string | null;
}

export function initialState(mode: "spatial" | "baseline", slideCount: number): StudentState {
    return {
        mode,
        slideCount,
        points: [],
        pending: null,
        rating: null,
        freeText: "",
        violations: [],
        error: null,
        submitting: false,
        submittedCardId: null,
    };
}

/** Double-click on a slide: the circle appears and the dialog opens. */
export function placePoint(s: StudentState, slideIndex: number, x: number, y: number): StudentState {
    return { ...s, pending: { slideIndex, x, y } };
}

/**
 * Dialog confirmed. An empty (or whitespace) explanation behaves exactly
 * like Cancel: the circle is removed.
 */
export function confirmPoint(s: StudentState, text: string): StudentState {
    if (s.pending === null) return s;
    const trimmed = text.trim();
    if (trimmed === "") return { ...s, pending: null };
    const point: DraftPoint = { ...s.pending, text: trimmed };
    return { ...s, pending: null, points: [...s.points, point] };
}

/** Dialog cancelled: the circle is removed. */
export function cancelPoint(s: StudentState): StudentState {
    return { ...s, pending: null };
}

/** The clear-all button: every one of this student's circles goes away. */
export function clearAll(s: StudentState): StudentState {
    return { ...s, points: [], pending: null };
}

export function chooseRating(s: StudentState, rating: RatingLabel): StudentState {
    return { ...s, rating };
}

export function setFreeText(s: StudentState, freeText: string): StudentState {
    return { ...s, freeText };
}

/** Submit activates only once a rating has been chosen. */
export function canSubmit(s: StudentState): boolean {
    return s.rating !== null && !s.submitting && s.submittedCardId === null;
}

export function buildPayload(s: StudentState): SubmitBody {
    const body: SubmitBody = {
        rating: s.rating,
        points: s.points.map((p) => ({ slide: p.slideIndex, x: p.x, y: p.y, text: p.text })),
    };
    if (s.mode === "baseline") {
        body.free_text = s.freeText.trim();
    }
    return body;
}

/** Pre-flight check mirroring the server; [] means go ahead and POST. */
export function localViolations(s: StudentState): Violation[] {
    return validateSubmitBody(buildPayload(s), s.mode, s.slideCount);
}

export function startSubmit(s: StudentState): StudentState {
    return { ...s, submitting: true, error: null };
}

/** Server said 422: show every violation, lose nothing the student entered. */
export function applyViolations(s: StudentState, violations: Violation[]): StudentState {
    return { ...s, submitting: false, violations };
}

export function applyNetworkError(s: StudentState, message: string): StudentState {
    return { ...s, submitting: false, error: message };
}

export function applySuccess(s: StudentState, cardId: string): StudentState {
    return { ...s, submitting: false, violations: [], error: null, submittedCardId: cardId };
}

/** Circles to draw on one slide: confirmed points plus the pending one. */
export function circlesFor(s: StudentState, slideIndex: number): { x: number; y: number; pending: boolean }[] {
    const circles = s.points
        .filter((p) => p.slideIndex === slideIndex)
        .map((p) => ({ x: p.x, y: p.y, pending: false }));
    if (s.pending !== null && s.pending.slideIndex === slideIndex) {
        circles.push({ x: s.pending.x, y: s.pending.y, pending: true });
    }
    return circles;
}

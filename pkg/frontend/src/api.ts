// Thin typed client for the feedback service; the only network surface the
// app talks to.

import type { StudentViewPayload, SubmitBody, SummaryPayload, Violation } from "./types.js";

export class ApiError extends Error {
    constructor(
        readonly status: number,
        message: string,
    ) {
        super(message);
    }
}

export type SubmitResult =
    | { kind: "created"; cardId: string }
    | { kind: "invalid"; violations: Violation[] };

async function getJson<T>(url: string): Promise<T> {
    const res = await fetch(url);
    if (!res.ok) {
        throw new ApiError(res.status, `request failed with status ${res.status}`);
    }
    return (await res.json()) as T;
}

export function fetchStudentView(token: string): Promise<StudentViewPayload> {
    return getJson(`/api/s/${encodeURIComponent(token)}`);
}

export function fetchSummary(token: string): Promise<SummaryPayload> {
    return getJson(`/api/t/${encodeURIComponent(token)}/summary`);
}

export async function submitCard(token: string, body: SubmitBody): Promise<SubmitResult> {
    const res = await fetch(`/api/s/${encodeURIComponent(token)}/cards`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
    });
    if (res.status === 201) {
        const payload = (await res.json()) as { card_id: string };
        return { kind: "created", cardId: payload.card_id };
    }
    if (res.status === 422) {
        const payload = (await res.json()) as { violations: Violation[] };
        return { kind: "invalid", violations: payload.violations };
    }
    throw new ApiError(res.status, `submission failed with status ${res.status}`);
}

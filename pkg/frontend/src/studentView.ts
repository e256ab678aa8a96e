// Student page: thumbnail gallery, double-click annotation with the
// explanation dialog, rating selector, submit. All behavior decisions live
// in student.ts; this file only reflects state into the DOM.

import { fetchStudentView, submitCard, ApiError } from "./api.js";
import { clear, el, prettyRating } from "./dom.js";
import { normalizeClick } from "./geometry.js";
import * as student from "./student.js";
import type { RatingLabel, StudentViewPayload } from "./types.js";

const CIRCLE_DIAMETER_PCT = 6; // 2 * the server's default radius_frac

export async function mountStudentView(root: HTMLElement, token: string): Promise<void> {
    let payload: StudentViewPayload;
    try {
        payload = await fetchStudentView(token);
    } catch (err) {
        renderAccessDenied(root, err);
        return;
    }

    let state = student.initialState(payload.mode, payload.slides.length);

    const update = (next: student.StudentState, rerender = true) => {
        state = next;
        if (rerender) render();
    };

    const openDialog = () => {
        const textarea = el("textarea", {
            class: "explain-input",
            placeholder: "Explain why this point was unclear…",
        });
        const confirm = () => {
            dialog.remove();
            update(student.confirmPoint(state, textarea.value));
        };
        const cancel = () => {
            dialog.remove();
            update(student.cancelPoint(state));
        };
        const dialog = el(
            "div",
            { class: "dialog-backdrop" },
            el(
                "div",
                { class: "dialog" },
                el("h3", {}, "Why was this point confusing?"),
                textarea,
                el(
                    "div",
                    { class: "dialog-buttons" },
                    el("button", { class: "secondary", onclick: cancel }, "Cancel"),
                    el("button", { onclick: confirm }, "Add muddy point"),
                ),
            ),
        );
        document.body.append(dialog);
        textarea.focus();
    };

    const submit = async () => {
        const local = student.localViolations(state);
        if (local.length > 0) {
            update(student.applyViolations(state, local));
            return;
        }
        update(student.startSubmit(state));
        try {
            const result = await submitCard(token, student.buildPayload(state));
            if (result.kind === "created") {
                update(student.applySuccess(state, result.cardId));
            } else {
                update(student.applyViolations(state, result.violations));
            }
        } catch (err) {
            const message = err instanceof ApiError ? err.message : "network error, please retry";
            update(student.applyNetworkError(state, message));
        }
    };

    const render = () => {
        clear(root);
        root.append(el("h1", {}, payload.title));
        root.append(el("p", { class: "instructions" }, payload.instructions));

        if (state.submittedCardId !== null) {
            root.append(
                el("p", { class: "success" }, "Submitted to teacher. Thank you for the feedback!"),
            );
            return;
        }

        if (payload.mode === "spatial") {
            root.append(renderGallery());
            root.append(
                el(
                    "button",
                    {
                        class: "secondary clear-all",
                        onclick: () => update(student.clearAll(state)),
                    },
                    "Clear all my muddy points",
                ),
            );
        } else {
            const box = el("textarea", {
                class: "free-text",
                placeholder: "Describe the muddiest point…",
                oninput: (e: Event) =>
                    update(student.setFreeText(state, (e.target as HTMLTextAreaElement).value), false),
            });
            box.value = state.freeText;
            root.append(box);
        }

        root.append(renderRating());
        root.append(renderViolations());
        root.append(
            el(
                "button",
                {
                    class: "submit",
                    disabled: !student.canSubmit(state),
                    onclick: submit,
                },
                state.submitting ? "Submitting…" : "Submit to Teacher",
            ),
        );
    };

    const renderGallery = () => {
        const gallery = el("div", { class: "gallery" });
        for (const slide of payload.slides) {
            const img = el("img", {
                src: slide.image_url,
                draggable: "false",
                alt: `Slide ${slide.index}`,
            });
            const wrap = el("div", { class: "slide-wrap" }, img);
            wrap.addEventListener("dblclick", (e) => {
                const rect = wrap.getBoundingClientRect();
                const click = normalizeClick(e.clientX, e.clientY, rect);
                update(student.placePoint(state, slide.index, click.x, click.y));
                openDialog();
            });
            for (const circle of student.circlesFor(state, slide.index)) {
                wrap.append(
                    el("div", {
                        class: circle.pending ? "circle pending" : "circle",
                        style:
                            `left:${(circle.x * 100).toFixed(3)}%;` +
                            `top:${(circle.y * 100).toFixed(3)}%;` +
                            `width:${CIRCLE_DIAMETER_PCT}%;`,
                    }),
                );
            }
            gallery.append(
                el("figure", {}, wrap, el("figcaption", {}, `Slide ${slide.index}`)),
            );
        }
        return gallery;
    };

    const renderRating = () => {
        const group = el("fieldset", { class: "rating" }, el("legend", {}, payload.rating_prompt));
        for (const label of payload.rating_labels) {
            const input = el("input", {
                type: "radio",
                name: "rating",
                value: label,
                onchange: () => update(student.chooseRating(state, label as RatingLabel)),
            });
            if (state.rating === label) input.checked = true;
            group.append(el("label", {}, input, ` ${prettyRating(label)}`));
        }
        return group;
    };

    const renderViolations = () => {
        const box = el("div", { class: "problems" });
        if (state.error !== null) {
            box.append(el("p", { class: "error" }, state.error));
        }
        if (state.violations.length > 0) {
            const list = el("ul", { class: "violations" });
            for (const v of state.violations) {
                const where = v.point_index === null ? "" : ` (point ${v.point_index + 1})`;
                list.append(el("li", {}, `${v.message}${where}`));
            }
            box.append(el("p", { class: "error" }, "Please fix the following and resubmit:"), list);
        }
        return box;
    };

    render();
}

export function renderAccessDenied(root: HTMLElement, err: unknown): void {
    clear(root);
    const status = err instanceof ApiError ? ` (${err.status})` : "";
    root.append(
        el("h1", {}, "Access denied"),
        el("p", {}, `This link is not valid${status}. Ask your teacher for a fresh one.`),
    );
}

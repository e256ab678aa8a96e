// Teacher dashboard: heatmapped gallery with the featured slide first,
// click pop-ups, per-slide flips, raw comments, histogram, word tree.
// Every number and color comes from the summary payload untouched.

import { fetchSummary } from "./api.js";
import { clear, el, prettyRating } from "./dom.js";
import { normalizeClick } from "./geometry.js";
import { renderAccessDenied } from "./studentView.js";
import * as teacher from "./teacher.js";
import type { SummaryPayload, SummarySlide, WordTreeNode } from "./types.js";

const HEATMAP_OPACITY = 0.35;

export async function mountTeacherView(root: HTMLElement, token: string): Promise<void> {
    let payload: SummaryPayload;
    try {
        payload = await fetchSummary(token);
    } catch (err) {
        renderAccessDenied(root, err);
        return;
    }

    let state = teacher.initialState();
    const update = (next: teacher.TeacherState) => {
        state = next;
        render();
    };

    const aspectStyle = (slide: SummarySlide) =>
        `aspect-ratio:${slide.width}/${slide.height};`;

    const render = () => {
        clear(root);
        root.append(el("h1", {}, payload.title));
        root.append(el("p", { class: "stats" }, teacher.statsCaption(payload.stats)));
        root.append(renderRatingHistogram());

        if (payload.mode === "spatial") {
            root.append(
                el(
                    "button",
                    { class: "secondary toggle", onclick: () => update(teacher.toggleHeatmap(state)) },
                    state.heatmapVisible ? "Hide heatmap" : "Show heatmap",
                ),
            );
            const gallery = el("div", { class: "gallery teacher" });
            for (const slide of payload.slides) {
                gallery.append(renderSlide(slide));
            }
            root.append(gallery);
        } else if (payload.baseline_comments !== null) {
            const list = el("ol", { class: "baseline-comments" });
            for (const comment of payload.baseline_comments) {
                list.append(
                    el("li", {}, el("b", {}, `[${prettyRating(comment.rating)}] `), comment.text),
                );
            }
            root.append(el("h2", {}, "Comments, most confusing first"), list);
        }

        root.append(renderAllComments());
        root.append(renderHistogram());
        root.append(renderWordTree());
        if (state.popup !== null) root.append(renderPopup());
    };

    const renderSlide = (slide: SummarySlide) => {
        const caption = teacher.slideCaption(slide);
        const flipped = teacher.isFlipped(state, slide.index);
        const figure = el("figure", { class: slide.featured ? "featured" : "" });

        if (flipped) {
            const list = el("ul", { class: "comment-list" });
            for (const comment of teacher.commentsForSlide(payload.comments, slide.index)) {
                list.append(
                    el("li", {}, el("b", {}, `[${prettyRating(comment.rating)}] `), comment.text),
                );
            }
            const back = el(
                "div",
                { class: "slide-wrap slide-back", style: aspectStyle(slide) },
                list,
            );
            figure.append(back);
        } else {
            const wrap = el(
                "div",
                { class: "slide-wrap" },
                el("img", { src: slide.image_url, draggable: "false", alt: caption }),
            );
            const layer = el("div", {
                class: state.heatmapVisible ? "circle-layer" : "circle-layer hidden",
            });
            for (const point of slide.points) {
                layer.append(
                    el("div", {
                        class: "circle heat",
                        style:
                            `left:${(point.x * 100).toFixed(3)}%;` +
                            `top:${(point.y * 100).toFixed(3)}%;` +
                            `width:${teacher.HEATMAP_RADIUS_FRAC * 200}%;` +
                            `background:${point.fill};opacity:${HEATMAP_OPACITY};`,
                    }),
                );
            }
            wrap.append(layer);
            wrap.addEventListener("click", (e) => {
                const rect = wrap.getBoundingClientRect();
                update(teacher.clickHeatmap(state, slide, normalizeClick(e.clientX, e.clientY, rect)));
            });
            figure.append(wrap);
        }

        figure.append(
            el(
                "figcaption",
                {},
                caption,
                el(
                    "button",
                    { class: "secondary flip", onclick: () => update(teacher.flipSlide(state, slide.index)) },
                    flipped ? "Show slide" : `Comments (${slide.point_count})`,
                ),
            ),
        );
        return figure;
    };

    const renderPopup = () => {
        const popup = state.popup!;
        const list = el("ul", {});
        for (const point of popup.points) {
            list.append(el("li", {}, el("b", {}, `[${prettyRating(point.rating)}] `), point.text));
        }
        return el(
            "div",
            { class: "dialog-backdrop", onclick: () => update(teacher.closePopup(state)) },
            el(
                "div",
                { class: "dialog" },
                el("h3", {}, `Muddy points here (slide ${popup.slideIndex})`),
                list,
                el("button", { onclick: () => update(teacher.closePopup(state)) }, "Close"),
            ),
        );
    };

    const renderRatingHistogram = () => {
        const parts = Object.entries(payload.stats.rating_histogram).map(
            ([label, count]) => `${prettyRating(label)}: ${count}`,
        );
        return el("p", { class: "rating-histogram" }, parts.join(" · "));
    };

    const renderAllComments = () => {
        const section = el("section", {}, el("h2", {}, "All muddy points, by slide"));
        if (payload.comments.length === 0) {
            section.append(el("p", {}, "No comments yet."));
            return section;
        }
        const list = el("ol", { class: "all-comments" });
        for (const comment of payload.comments) {
            list.append(
                el(
                    "li",
                    {},
                    el("b", {}, `slide ${comment.slide_index} `),
                    `[${prettyRating(comment.rating)}] ${comment.text}`,
                ),
            );
        }
        section.append(list);
        return section;
    };

    const renderHistogram = () => {
        const section = el("section", {}, el("h2", {}, "Frequent words"));
        const max = payload.histogram.length > 0 ? payload.histogram[0].count : 0;
        const rows = el("div", { class: "histogram" });
        for (const entry of payload.histogram) {
            rows.append(
                el(
                    "div",
                    { class: "bar-row" },
                    el("span", { class: "bar-label" }, entry.token),
                    el("div", {
                        class: "bar",
                        style: `width:${max > 0 ? (entry.count / max) * 100 : 0}%`,
                    }),
                    el("span", { class: "bar-count" }, String(entry.count)),
                ),
            );
        }
        section.append(rows);
        return section;
    };

    const renderWordTree = () => {
        const section = el("section", {}, el("h2", {}, "Word tree"));
        if (payload.word_tree === null) {
            section.append(el("p", {}, "No comments yet."));
            return section;
        }
        section.append(renderTreeNode(payload.word_tree));
        return section;
    };

    const renderTreeNode = (node: WordTreeNode): HTMLElement => {
        const item = el(
            "div",
            { class: "tree-node" },
            el("span", { class: "tree-token" }, `${node.token} `),
            el("span", { class: "tree-count" }, `(${node.count})`),
        );
        if (node.children.length > 0) {
            const children = el("div", { class: "tree-children" });
            for (const child of node.children) {
                children.append(renderTreeNode(child));
            }
            item.append(children);
        }
        return item;
    };

    render();
}

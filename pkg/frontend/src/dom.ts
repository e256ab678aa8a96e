// Minimal element builder; no framework, no virtual DOM.

type Attrs = Record<string, string | boolean | EventListener>;

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Attrs = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (typeof value === "function") {
            node.addEventListener(key.replace(/^on/, ""), value);
        } else if (typeof value === "boolean") {
            if (value) node.setAttribute(key, "");
            if (key === "disabled") (node as unknown as { disabled: boolean }).disabled = value;
        } else {
            node.setAttribute(key, value);
        }
    }
    node.append(...children);
    return node;
}

export function clear(node: HTMLElement): void {
    while (node.firstChild) node.removeChild(node.firstChild);
}

export function prettyRating(label: string): string {
    return label.replace(/_/g, " ");
}

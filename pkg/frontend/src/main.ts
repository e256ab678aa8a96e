// Entry point: the path decides the role. /s/{token} is the student view,
// /t/{token} the teacher dashboard.

import { clear, el } from "./dom.js";
import { mountStudentView } from "./studentView.js";
import { mountTeacherView } from "./teacherView.js";

export function parseRoute(pathname: string): { role: "student" | "teacher"; token: string } | null {
    const match = /^\/(s|t)\/([^/]+)\/?$/.exec(pathname);
    if (match === null) return null;
    return { role: match[1] === "s" ? "student" : "teacher", token: match[2] };
}

async function boot(): Promise<void> {
    const root = document.getElementById("app");
    if (root === null) return;
    const route = parseRoute(window.location.pathname);
    if (route === null) {
        clear(root);
        root.append(
            el("h1", {}, "Lecture feedback"),
            el("p", {}, "Open the student or teacher link your teacher shared with you."),
        );
        return;
    }
    if (route.role === "student") {
        await mountStudentView(root, route.token);
    } else {
        await mountTeacherView(root, route.token);
    }
}

if (typeof document !== "undefined") {
    void boot();
}

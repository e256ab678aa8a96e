// Wire types mirroring the service's JSON payloads. The client renders these
// verbatim; it never recomputes counts, shares, colors, or trees.

export type RatingLabel =
    | "extremely_confusing"
    | "moderately_confusing"
    | "slightly_confusing"
    | "not_confusing";

export type LectureMode = "spatial" | "baseline";

export interface SlideInfo {
    index: number;
    image_url: string;
    width: number;
    height: number;
}

export interface StudentViewPayload {
    lecture_id: string;
    title: string;
    mode: LectureMode;
    instructions: string;
    rating_prompt: string;
    rating_labels: RatingLabel[];
    slides: SlideInfo[];
}

export interface Violation {
    code: string;
    point_index: number | null;
    message: string;
}

export interface SubmitBody {
    rating: RatingLabel | null;
    points: { slide: number; x: number; y: number; text: string }[];
    free_text?: string;
}

export interface SummaryStatsPayload {
    card_count: number;
    point_count: number;
    points_per_card_mean: number;
    rating_histogram: Record<RatingLabel, number>;
    featured_slide: number | null;
}

export interface SummaryPoint {
    x: number;
    y: number;
    text: string;
    card_id: string;
    rating: RatingLabel;
    color_class: string;
    fill: string;
}

export interface SummarySlide {
    index: number;
    image_url: string;
    width: number;
    height: number;
    featured: boolean;
    point_count: number;
    share: number;
    points: SummaryPoint[];
}

export interface SlideComment {
    slide_index: number;
    text: string;
    rating: RatingLabel;
    card_id: string;
}

export interface HistogramEntry {
    token: string;
    count: number;
}

export interface WordTreeNode {
    token: string;
    count: number;
    terminal_count: number;
    children: WordTreeNode[];
}

export interface SummaryPayload {
    lecture_id: string;
    title: string;
    mode: LectureMode;
    stats: SummaryStatsPayload;
    slides: SummarySlide[];
    comments: SlideComment[];
    baseline_comments: { text: string; rating: RatingLabel }[] | null;
    histogram: HistogramEntry[];
    word_tree: WordTreeNode | null;
}

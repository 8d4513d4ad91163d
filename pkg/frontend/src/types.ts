/**
 * Shapes of the JSON the analytics service returns. These mirror the
 * server's response schemas; the dashboard never invents fields.
 */

export type ColorToken = "green" | "red" | "gray" | null;

export interface ClusterAnnotation {
  dominant_sentiment: string;
  dominant_emotion: string | null;
  sentiment_counts: Record<string, number>;
  emotion_counts: Record<string, number>;
}

export interface ClusterDoc {
  id: string;
  centroid: number[];
  member_post_ids: string[];
  top_terms: string[];
  color: ColorToken;
  annotation: ClusterAnnotation | null;
}

export interface LayerDoc {
  index: number;
  window: { start: string; end: string };
  clusters: ClusterDoc[];
}

export interface EdgeDoc {
  from: string;
  to: string;
  weight: number;
}

export interface PathwaysDoc {
  entity: string;
  run: string;
  layers: LayerDoc[];
  edges: EdgeDoc[];
}

export interface AspectRow {
  term: string;
  positive_pct: number;
  mentions: number;
}

export interface InsightsDoc {
  entity: string;
  run: string;
  aspects: AspectRow[];
  top_emotions: { emotion: string; count: number }[];
}

export interface PostAspect {
  term: string;
  label: string;
  confidence: number;
}

export interface PostRow {
  id: string;
  text: string;
  timestamp: string;
  sentiment: string;
  emotions: string[];
  aspects: PostAspect[];
  cluster: string | null;
}

export interface PostsDoc {
  entity: string;
  run: string;
  cluster: string | null;
  posts: PostRow[];
}

export interface EntityRow {
  id: string;
  post_count: number;
  latest_run: string | null;
}

export interface RunSummary {
  run_id: string;
  entity: string;
  status: "running" | "completed";
}

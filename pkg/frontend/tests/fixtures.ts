/**
 * Canonical fixture payloads for UI tests: a two-layer graph whose
 * second layer holds a child with two parents, plus the matching
 * insight report and the 2-parent cluster's member posts.
 */

import type { InsightsDoc, PathwaysDoc, PostsDoc } from "../src/types.js";

export const FIXTURE_GRAPH: PathwaysDoc = {
  entity: "blue-lagoon-hotel",
  run: "run-0001",
  layers: [
    {
      index: 0,
      window: { start: "2024-03-01T08:00:00Z", end: "2024-03-02T08:00:00Z" },
      clusters: [
        {
          id: "L0C1",
          centroid: [0.4, 0.1],
          member_post_ids: ["p001", "p002", "p003"],
          top_terms: ["food", "curry"],
          color: "green",
          annotation: {
            dominant_sentiment: "positive",
            dominant_emotion: "joy",
            sentiment_counts: { positive: 2, neutral: 1 },
            emotion_counts: { joy: 2 },
          },
        },
        {
          id: "L0C2",
          centroid: [0.1, 0.5],
          member_post_ids: ["p004"],
          top_terms: ["room"],
          color: "red",
          annotation: {
            dominant_sentiment: "negative",
            dominant_emotion: "anger",
            sentiment_counts: { negative: 1 },
            emotion_counts: { anger: 1 },
          },
        },
      ],
    },
    {
      index: 1,
      window: { start: "2024-03-02T08:00:00Z", end: "2024-03-03T08:00:00Z" },
      clusters: [
        {
          id: "L1C1",
          centroid: [0.3, 0.3],
          member_post_ids: ["p005", "p006"],
          top_terms: ["food", "room"],
          color: "gray",
          annotation: {
            dominant_sentiment: "neutral",
            dominant_emotion: null,
            sentiment_counts: { neutral: 1, negative: 1 },
            emotion_counts: {},
          },
        },
        {
          id: "L1C2",
          centroid: [0.5, 0.0],
          member_post_ids: ["p007"],
          top_terms: ["menu"],
          color: "green",
          annotation: {
            dominant_sentiment: "positive",
            dominant_emotion: "joy",
            sentiment_counts: { positive: 1 },
            emotion_counts: { joy: 1 },
          },
        },
      ],
    },
  ],
  edges: [
    { from: "L0C1", to: "L1C1", weight: 0.7 },
    { from: "L0C2", to: "L1C1", weight: 0.6 },
    { from: "L0C1", to: "L1C2", weight: 0.8 },
  ],
};

export const TWO_PARENT_NODE = "L1C1";

export const FIXTURE_REPORT: InsightsDoc = {
  entity: "blue-lagoon-hotel",
  run: "run-0001",
  aspects: [
    { term: "food", positive_pct: 75.0, mentions: 4 },
    { term: "room", positive_pct: 20.0, mentions: 5 },
    { term: "menu", positive_pct: 100.0, mentions: 1 },
  ],
  top_emotions: [
    { emotion: "joy", count: 2 },
    { emotion: "anger", count: 1 },
  ],
};

export const FIXTURE_CLUSTER_POSTS: PostsDoc = {
  entity: "blue-lagoon-hotel",
  run: "run-0001",
  cluster: TWO_PARENT_NODE,
  posts: [
    {
      id: "p005",
      text: "The food was fine but the room was tiny",
      timestamp: "2024-03-02T09:15:00Z",
      sentiment: "neutral",
      emotions: ["anticipation"],
      aspects: [
        { term: "food", label: "neutral", confidence: 0.62 },
        { term: "room", label: "negative", confidence: 0.81 },
      ],
      cluster: TWO_PARENT_NODE,
    },
    {
      id: "p006",
      text: "room service brought the wrong curry again",
      timestamp: "2024-03-02T11:40:00Z",
      sentiment: "negative",
      emotions: ["anger", "disgust"],
      aspects: [{ term: "room service", label: "negative", confidence: 0.77 }],
      cluster: TWO_PARENT_NODE,
    },
  ],
};

export const EMPTY_GRAPH: PathwaysDoc = {
  entity: "blue-lagoon-hotel",
  run: "run-0001",
  layers: [],
  edges: [],
};

export * from "./types";
export * from "./theme";
export * from "./state";
export * from "./api";
export * from "./scene";
export * from "./heatmap";
export * from "./wordcloud";
export * from "./weights";
export * from "./debounce";
export * from "./controller";

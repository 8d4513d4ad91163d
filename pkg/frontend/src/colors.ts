import type { ColorToken } from "./types.js";

// The server emits symbolic tokens; the hex values are this client's
// contract. Unannotated clusters read as neutral.
export const HEX = {
  green: "#2e7d32",
  red: "#c62828",
  gray: "#9e9e9e",
} as const;

export function tokenToHex(token: ColorToken | undefined): string {
  if (token === "green" || token === "red") return HEX[token];
  return HEX.gray;
}

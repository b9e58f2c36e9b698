// Object palette and gesture list for the world controls panel.

/** Marker fill colors for the stock table objects; anything else renders gray. */
export const OBJECT_PALETTE: readonly { name: string; fill: string }[] = [
  { name: "banana", fill: "#e8c832" },
  { name: "pear", fill: "#9dbf4e" },
  { name: "lemon", fill: "#f2e14c" },
  { name: "red bowl", fill: "#d64545" },
  { name: "apple", fill: "#b03030" },
  { name: "orange", fill: "#e8923a" },
  { name: "can", fill: "#9aa5b1" },
];

export const GESTURES: readonly string[] = ["wave", "grasp", "pause", "stop"];

export function fillFor(name: string): string {
  const entry = OBJECT_PALETTE.find((p) => p.name === name);
  return entry ? entry.fill : "#8e8e93";
}

/**
 * Deterministic staggered drop spot for the i-th object placed without an
 * explicit position (row-major grid across the table).
 */
export function spawnPosition(index: number): [number, number] {
  const col = index % 5;
  const row = Math.floor(index / 5) % 3;
  return [-0.48 + col * 0.24, 0.2 + row * 0.2];
}

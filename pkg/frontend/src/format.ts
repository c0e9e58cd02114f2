/** Number formatting. Display only; values themselves are never changed. */

/** Six significant digits with trailing zeros trimmed, like the CLI tables. */
export function formatConfidence(value: number): string {
  if (!Number.isFinite(value)) {
    return String(value);
  }
  return String(Number(value.toPrecision(6)));
}

/** Signed difference badge between a shown value and its baseline. */
export function formatDelta(current: number, baseline: number): string {
  if (current === baseline) {
    return "";
  }
  const diff = Number((current - baseline).toPrecision(3));
  return diff > 0 ? `+${diff}` : String(diff);
}

/** Percentage with one decimal, for compact badges. */
export function formatPercent(value: number): string {
  return `${Number((value * 100).toPrecision(4))}%`;
}

/** Number formatting. Tooltips must show service payload values exactly. */

/**
 * Render a payload value with full fidelity: the shortest decimal string
 * that round-trips to the same float64, i.e. every displayed digit is
 * the service's. No client-side rounding or recomputation.
 */
export function formatExact(value: number): string {
  return String(value);
}

/** Compact axis/legend labels (not used for tooltips). */
export function formatShort(value: number, digits = 4): string {
  if (value === 0) return '0';
  const magnitude = Math.abs(value);
  if (magnitude >= 0.001 && magnitude < 10_000) {
    return Number(value.toPrecision(digits)).toString();
  }
  return value.toExponential(Math.max(0, digits - 1));
}

export function formatBound(bound: number | null): string {
  return bound === null ? 'uncapped' : `${bound}x cap`;
}

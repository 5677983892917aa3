/**
 * Canonical text form (sorted keys, no whitespace, shortest round-trip
 * numbers) so stub argument tuples typed in the editor match the engine's
 * matching rule exactly.
 */

export function canonicalize(value: unknown): string {
  if (value === null || value === undefined) {
    return "null";
  }
  switch (typeof value) {
    case "boolean":
    case "number":
    case "string":
      if (typeof value === "number" && !Number.isFinite(value)) {
        throw new Error(`non-finite number ${value}`);
      }
      return JSON.stringify(value);
    case "object": {
      if (Array.isArray(value)) {
        return `[${value.map((item) => canonicalize(item)).join(",")}]`;
      }
      const record = value as Record<string, unknown>;
      const keys = Object.keys(record).sort();
      return `{${keys
        .map((key) => `${JSON.stringify(key)}:${canonicalize(record[key])}`)
        .join(",")}}`;
    }
    default:
      throw new Error(`unsupported value type ${typeof value}`);
  }
}

/**
 * Canonical text form for structured values: object keys sorted, no
 * insignificant whitespace, numbers in shortest round-trip decimal form.
 * Mirrors the engine's canonicalization so stub matching and io-pair
 * comparison agree byte-for-byte across the process boundary (within the
 * JSON-safe numeric range).
 */

export class CanonicalizationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CanonicalizationError";
  }
}

export type CanonicalValue =
  | null
  | boolean
  | number
  | string
  | CanonicalValue[]
  | { [key: string]: CanonicalValue };

export function canonicalize(value: unknown): string {
  return render(value, "$");
}

export function canonicalEqual(a: unknown, b: unknown): boolean {
  return canonicalize(a) === canonicalize(b);
}

function render(value: unknown, path: string): string {
  if (value === null || value === undefined) {
    return "null";
  }
  switch (typeof value) {
    case "boolean":
      return value ? "true" : "false";
    case "number": {
      if (!Number.isFinite(value)) {
        throw new CanonicalizationError(`${path}: non-finite number ${value}`);
      }
      // JSON.stringify renders integral doubles without a fraction and
      // -0 as "0", matching the engine's integer normalization.
      return JSON.stringify(value);
    }
    case "string":
      return JSON.stringify(value);
    case "object": {
      if (Array.isArray(value)) {
        const parts = value.map((item, i) => render(item, `${path}[${i}]`));
        return `[${parts.join(",")}]`;
      }
      const record = value as Record<string, unknown>;
      const keys = Object.keys(record).sort();
      const parts = keys.map(
        (key) => `${JSON.stringify(key)}:${render(record[key], `${path}.${key}`)}`,
      );
      return `{${parts.join(",")}}`;
    }
    default:
      throw new CanonicalizationError(
        `${path}: unsupported value type ${typeof value}`,
      );
  }
}

export function parseCanonical(text: string): CanonicalValue {
  try {
    return JSON.parse(text) as CanonicalValue;
  } catch (err) {
    throw new CanonicalizationError(`invalid canonical text: ${String(err)}`);
  }
}

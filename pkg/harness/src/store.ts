/**
 * In-memory keyed-document store exposed to authored code; discarded and
 * rebuilt from the bundle seed before every test execution.
 */

import { SeedEntry } from "./types";

export class MissingDocumentError extends Error {
  constructor(collection: string, id: string) {
    super(`no document ${collection}/${id}`);
    this.name = "MissingDocumentError";
  }
}

export class DocumentStore {
  private collections = new Map<string, Map<string, unknown>>();

  constructor(seed: SeedEntry[] = []) {
    this.reset(seed);
  }

  reset(seed: SeedEntry[]): void {
    this.collections = new Map();
    for (const entry of seed) {
      this.save(entry.collection, entry.id, entry.value);
    }
  }

  private bucket(collection: string): Map<string, unknown> {
    checkKey(collection, "collection");
    let bucket = this.collections.get(collection);
    if (!bucket) {
      bucket = new Map();
      this.collections.set(collection, bucket);
    }
    return bucket;
  }

  save(collection: string, id: string, value: unknown): unknown {
    checkKey(id, "id");
    this.bucket(collection).set(id, value);
    return value;
  }

  get(collection: string, id: string): unknown {
    checkKey(id, "id");
    const bucket = this.bucket(collection);
    return bucket.has(id) ? bucket.get(id) : null;
  }

  update(collection: string, id: string, value: unknown): unknown {
    checkKey(id, "id");
    const bucket = this.bucket(collection);
    if (!bucket.has(id)) {
      throw new MissingDocumentError(collection, id);
    }
    bucket.set(id, value);
    return value;
  }

  remove(collection: string, id: string): boolean {
    checkKey(id, "id");
    return this.bucket(collection).delete(id);
  }

  list(collection: string): unknown[] {
    return Array.from(this.bucket(collection).values());
  }

  snapshot(): SeedEntry[] {
    const entries: SeedEntry[] = [];
    for (const [collection, bucket] of this.collections) {
      for (const [id, value] of bucket) {
        entries.push({ collection, id, value });
      }
    }
    return entries;
  }
}

function checkKey(value: string, what: string): void {
  if (typeof value !== "string" || value.length === 0) {
    throw new TypeError(`${what} must be a nonempty string`);
  }
}

/**
 * Wire-protocol conformance: every shared fixture answered byte-for-byte
 * through a real harness process.
 */

import { spawn, ChildProcessWithoutNullStreams } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { canonicalize } from "../src/canonical";
import { encodeFrame, FrameReader } from "../src/wire";

interface Fixture {
  name: string;
  request: unknown;
  expectedResponse: unknown;
}

const fixturePath = join(__dirname, "..", "fixtures", "conformance.json");
const fixtures: Fixture[] = JSON.parse(readFileSync(fixturePath, "utf-8")).cases;

const harnessMain = join(__dirname, "..", "dist", "main.js");

function requestOver(
  child: ChildProcessWithoutNullStreams,
  payload: unknown,
): Promise<unknown> {
  return new Promise((resolve, reject) => {
    const reader = new FrameReader();
    const onData = (chunk: Buffer) => {
      try {
        const frames = reader.push(chunk);
        if (frames.length > 0) {
          child.stdout.off("data", onData);
          resolve(frames[0]);
        }
      } catch (err) {
        reject(err);
      }
    };
    child.stdout.on("data", onData);
    child.stdin.write(encodeFrame(payload));
  });
}

describe("harness conformance suite", () => {
  let child: ChildProcessWithoutNullStreams;

  beforeAll(() => {
    child = spawn(process.execPath, [harnessMain], {
      stdio: ["pipe", "pipe", "pipe"],
    });
  });

  afterAll(() => {
    child.kill();
  });

  it("answers every fixture byte-for-byte", async () => {
    for (const fixture of fixtures) {
      const response = await requestOver(child, fixture.request);
      expect(canonicalize(response), fixture.name).toBe(
        canonicalize(fixture.expectedResponse),
      );
    }
  }, 30000);

  it("covers the required cases", () => {
    const names = fixtures.map((f) => f.name);
    expect(names).toContain("type-error-illegal-argument-surfaced");
    expect(names).toContain("infinite-loop-times-out");
    expect(names).toContain("stub-hit-on-unimplemented-callee");
    expect(names).toContain("stub-miss-errors-test");
    expect(names).toContain("persistence-seed-order-and-reset");
  });

  it("serves bundles in either order with identical reports", async () => {
    const a = fixtures[0];
    const b = fixtures[6]; // the persistence case
    const fresh = spawn(process.execPath, [harnessMain], {
      stdio: ["pipe", "pipe", "pipe"],
    });
    try {
      const first = await requestOver(fresh, b.request);
      const second = await requestOver(fresh, a.request);
      expect(canonicalize(first)).toBe(canonicalize(b.expectedResponse));
      expect(canonicalize(second)).toBe(canonicalize(a.expectedResponse));
    } finally {
      fresh.kill();
    }
  }, 30000);
});

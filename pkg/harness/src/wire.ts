/**
 * Length-delimited canonical records over a byte stream.
 *
 * Frame: ASCII decimal byte length, a newline, then exactly that many
 * bytes of canonical-form text. One request in flight per process.
 */

import { canonicalize, parseCanonical } from "./canonical";

export class ProtocolViolation extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ProtocolViolation";
  }
}

export function encodeFrame(payload: unknown): Buffer {
  const body = Buffer.from(canonicalize(payload), "utf-8");
  return Buffer.concat([Buffer.from(`${body.length}\n`, "ascii"), body]);
}

/** Incremental frame parser fed with arbitrary byte chunks. */
export class FrameReader {
  private buffer = Buffer.alloc(0);

  push(chunk: Buffer): unknown[] {
    this.buffer = Buffer.concat([this.buffer, chunk]);
    const frames: unknown[] = [];
    for (;;) {
      const newline = this.buffer.indexOf(0x0a);
      if (newline < 0) {
        if (this.buffer.length > 32) {
          throw new ProtocolViolation("frame header too long");
        }
        return frames;
      }
      const header = this.buffer.subarray(0, newline).toString("ascii").trim();
      if (!/^\d+$/.test(header)) {
        throw new ProtocolViolation(`bad frame header ${JSON.stringify(header)}`);
      }
      const length = Number(header);
      const total = newline + 1 + length;
      if (this.buffer.length < total) {
        return frames;
      }
      const body = this.buffer.subarray(newline + 1, total).toString("utf-8");
      this.buffer = this.buffer.subarray(total);
      let parsed: unknown;
      try {
        parsed = parseCanonical(body);
      } catch (err) {
        throw new ProtocolViolation(`unparseable frame body: ${String(err)}`);
      }
      if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
        throw new ProtocolViolation("frame payload is not an object");
      }
      frames.push(parsed);
    }
  }
}

/**
 * Harness entry point: serve the wire protocol over stdin/stdout.
 *
 * Authored-code failures become per-test statuses and never kill the
 * process; only a protocol violation exits nonzero.
 */

import { runBundle } from "./executor";
import { WireBundle } from "./types";
import { encodeFrame, FrameReader, ProtocolViolation } from "./wire";

export function serve(): void {
  const reader = new FrameReader();
  process.stdin.on("data", (chunk: Buffer) => {
    let requests: unknown[];
    try {
      requests = reader.push(chunk);
    } catch (err) {
      if (err instanceof ProtocolViolation) {
        process.stderr.write(`protocol violation: ${err.message}\n`);
        process.exit(1);
      }
      throw err;
    }
    for (const request of requests) {
      const report = runBundle(request as WireBundle);
      process.stdout.write(encodeFrame(report));
    }
  });
  process.stdin.on("end", () => {
    process.exit(0);
  });
}

if (require.main === module) {
  serve();
}

/**
 * Scripted end-to-end session against a running service process:
 * fetch -> test-first fail -> implement -> pass -> submit, then a second
 * session reviews with 2 stars and the rework microtask carries the
 * feedback text.
 */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api";
import { ReviewController } from "../src/review";
import { WorkspaceController } from "../src/workspace";

const PORT = 8917;
const BASE = `http://127.0.0.1:${PORT}`;

const pingRequest = {
  projectName: "ping-service",
  projectDescription: "Single health-check endpoint.",
  endpoints: [
    {
      functionName: "ping",
      description: "Returns the string 'pong' so callers can check liveness.",
      params: [],
      returnType: "string",
    },
  ],
  adts: [],
};

let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/projects/nope/dashboard`, {
        headers: { Authorization: "Bearer worker:probe" },
      });
      if (response.status > 0) return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "crowdflow-ui-e2e-"));
  service = spawn(
    "python3",
    ["-m", "crowdflow.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT),
     "--data-dir", dataDir],
    { stdio: ["ignore", "pipe", "pipe"], cwd: join(__dirname, "..", "..") },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service?.kill();
});

describe("worker UI end-to-end", () => {
  it("drives implement -> review(2 stars) -> rework against the live service", async () => {
    const client = new ServiceClient(BASE, "client:c1");
    const { projectId } = await client.createProject(pingRequest, "ui-e2e");
    expect(projectId).toBe("ui-e2e");

    // Session 1: worker w1 implements test-first.
    const w1 = new ServiceClient(BASE, "worker:w1");
    const workspace = new WorkspaceController(w1, projectId);
    const assignment = await workspace.fetchNext();
    expect(assignment?.microtask.kind).toBe("implement-behavior");
    expect(assignment?.microtask.context.function.name).toBe("ping");

    workspace.addIoPairTest([], "pong", "returns pong");
    const red = await workspace.runTests();
    expect(red.perTest[0].status).toBe("failed"); // red first

    workspace.codeBuffer = 'return "pong"';
    const green = await workspace.runTests();
    expect(green.perTest[0].status).toBe("passed");
    expect(workspace.allGreen()).toBe(true);

    const nowMin = Date.now() / 60000;
    const submissionId = await workspace.submitContribution(nowMin);
    expect(submissionId).toBeTruthy();

    // Session 2: worker w2 reviews with 2 stars and feedback.
    const w2 = new ServiceClient(BASE, "worker:w2");
    const reviewer = new WorkspaceController(w2, projectId);
    const reviewAssignment = await reviewer.fetchNext();
    expect(reviewAssignment?.microtask.kind).toBe("review");

    const review = new ReviewController(w2, reviewAssignment!);
    const diff = review.diff();
    expect(diff.some((row) => row.kind === "added" && row.text.includes("pong"))).toBe(
      true,
    );
    review.setStars(2);
    expect(review.canSubmit()).toBe(false); // inline validation, no post
    review.setFeedback("cover the failure path too");
    expect(review.canSubmit()).toBe(true);
    await review.submit(Date.now() / 60000);

    // The rework microtask appears with the feedback text.
    const again = new WorkspaceController(w1, projectId);
    const rework = await again.fetchNext();
    expect(rework?.microtask.kind).toBe("implement-behavior");
    expect(again.reworkFeedback).toBe("cover the failure path too");
    // The rejected-but-applied code is the base for rework.
    expect(again.codeBuffer).toBe('return "pong"');

    // Leaderboard reflects the review: 2 stars -> 4 points, reviewer 5.
    const rows = await w1.leaderboard(projectId);
    expect(rows).toEqual([
      { workerId: "w2", total: 5 },
      { workerId: "w1", total: 4 },
    ]);

    // Notification for the implementer carries stars and feedback.
    const notes = await w1.notifications("w1");
    const note = notes.find((n) => n.kind === "review-received");
    expect(note?.detail.stars).toBe(2);
    expect(note?.detail.feedback).toBe("cover the failure path too");
  }, 30000);
});

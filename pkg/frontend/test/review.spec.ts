import { describe, expect, it } from "vitest";

import { WorkflowApi } from "../src/api";
import { ReviewController } from "../src/review";
import { AssignmentView } from "../src/types";

function reviewAssignment(): AssignmentView {
  return {
    assignmentId: "mt-2",
    deadline: 30,
    warningAt: 29,
    microtask: {
      id: "mt-2",
      kind: "review",
      state: "assigned",
      context: {
        function: {
          id: "fn-1",
          name: "ping",
          description: "returns pong",
          params: [],
          returnType: "string",
          state: "awaiting-work",
          code: "return 1",
          tests: [],
          stubs: [],
          version: 1,
        },
        submission: {
          id: "s-1",
          microtaskId: "mt-1",
          workerId: "w1",
          payload: { kind: "behavior-contribution", codeDiff: "return 2" },
        },
        previousVersion: { code: "return 1", version: 1 },
      },
    },
  };
}

class RecordingApi implements WorkflowApi {
  bodies: unknown[] = [];

  async fetchMicrotask() {
    return null;
  }

  async runTests(): Promise<never> {
    throw new Error("not used");
  }

  async submit(_id: string, body: unknown) {
    this.bodies.push(body);
    return {};
  }

  async skip() {
    return { skipped: true };
  }
}

describe("review validation", () => {
  it("requires a rating before submitting", () => {
    const review = new ReviewController(new RecordingApi(), reviewAssignment());
    expect(review.canSubmit()).toBe(false);
    expect(review.validationError()).toContain("choose a rating");
  });

  it("three stars or fewer require feedback", () => {
    const review = new ReviewController(new RecordingApi(), reviewAssignment());
    review.setStars(3);
    expect(review.canSubmit()).toBe(false);
    expect(review.validationError()).toContain("feedback is required");
    review.setFeedback("  ");
    expect(review.canSubmit()).toBe(false);
    review.setFeedback("please cover the error path");
    expect(review.canSubmit()).toBe(true);
  });

  it("four or five stars post without feedback", () => {
    const review = new ReviewController(new RecordingApi(), reviewAssignment());
    review.setStars(4);
    expect(review.canSubmit()).toBe(true);
  });

  it("rejects out-of-range stars", () => {
    const review = new ReviewController(new RecordingApi(), reviewAssignment());
    expect(() => review.setStars(0)).toThrow(RangeError);
    expect(() => review.setStars(6)).toThrow(RangeError);
  });

  it("posting a blocked decision throws the validation message", async () => {
    const api = new RecordingApi();
    const review = new ReviewController(api, reviewAssignment());
    review.setStars(2);
    await expect(review.submit(1.0)).rejects.toThrow(/feedback is required/);
    expect(api.bodies).toHaveLength(0);
  });

  it("posts stars and feedback", async () => {
    const api = new RecordingApi();
    const review = new ReviewController(api, reviewAssignment());
    review.setStars(2);
    review.setFeedback("only checked the date validity");
    await review.submit(1.0);
    expect(api.bodies).toEqual([
      { stars: 2, feedback: "only checked the date validity" },
    ]);
  });

  it("diff is computed client-side from the two versions", () => {
    const review = new ReviewController(new RecordingApi(), reviewAssignment());
    const rows = review.diff();
    expect(rows.map((r) => r.kind).sort()).toEqual(["added", "removed"]);
    expect(rows.find((r) => r.kind === "added")?.text).toBe("return 2");
  });

  it("refuses a non-review assignment", () => {
    const wrong = reviewAssignment();
    wrong.microtask.kind = "implement-behavior";
    expect(() => new ReviewController(new RecordingApi(), wrong)).toThrow();
  });
});

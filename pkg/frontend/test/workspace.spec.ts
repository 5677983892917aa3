import { describe, expect, it } from "vitest";

import { WorkflowApi } from "../src/api";
import { AssignmentView, TestRunReportView } from "../src/types";
import { AssignmentGone, WorkspaceController } from "../src/workspace";

function assignment(overrides: Partial<AssignmentView> = {}): AssignmentView {
  return {
    assignmentId: "mt-1",
    deadline: 15,
    warningAt: 14,
    microtask: {
      id: "mt-1",
      kind: "implement-behavior",
      state: "assigned",
      context: {
        function: {
          id: "fn-1",
          name: "ping",
          description: "returns pong",
          params: [],
          returnType: "string",
          state: "awaiting-work",
          code: "",
          tests: [],
          stubs: [],
          version: 0,
        },
      },
    },
    ...overrides,
  };
}

function report(status: "passed" | "failed"): TestRunReportView {
  return {
    bundleId: "b",
    perTest: [{ testId: "t", status, traces: [], stubHits: [], stubMisses: [] }],
    persistenceFinalState: [],
  };
}

class FakeApi implements WorkflowApi {
  assignments: (AssignmentView | null)[] = [];
  submissions: { assignmentId: string; body: unknown }[] = [];
  skips: string[] = [];
  nextReport: TestRunReportView = report("failed");
  runBodies: unknown[] = [];

  async fetchMicrotask(): Promise<AssignmentView | null> {
    return this.assignments.shift() ?? null;
  }

  async runTests(_assignmentId: string, body: unknown): Promise<TestRunReportView> {
    this.runBodies.push(body);
    return this.nextReport;
  }

  async submit(assignmentId: string, body: unknown): Promise<{ submissionId?: string }> {
    this.submissions.push({ assignmentId, body });
    return { submissionId: "s-1" };
  }

  async skip(assignmentId: string): Promise<{ skipped: boolean }> {
    this.skips.push(assignmentId);
    return { skipped: true };
  }
}

function controller(api = new FakeApi()) {
  return { api, ws: new WorkspaceController(api, "p-1") };
}

describe("countdown and warning", () => {
  it("countdown mirrors the server deadline", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    expect(ws.countdownMinutes(0)).toBe(15);
    expect(ws.countdownMinutes(10.5)).toBe(4.5);
    expect(ws.countdownMinutes(20)).toBe(0);
  });

  it("warning fires exactly once at the server's warning instant", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    expect(ws.shouldWarn(13.9)).toBe(false);
    expect(ws.shouldWarn(14.0)).toBe(true);
    expect(ws.shouldWarn(14.2)).toBe(false);
    expect(ws.shouldWarn(14.9)).toBe(false);
  });

  it("no warning once expired", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    expect(ws.shouldWarn(15.0)).toBe(false);
    expect(ws.expired(15.0)).toBe(true);
  });
});

describe("terminal actions", () => {
  it("exactly one terminal action per assignment", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    await ws.submitContribution(1.0);
    await expect(ws.submitContribution(1.1)).rejects.toThrow(AssignmentGone);
    await expect(ws.markComplete(1.1)).rejects.toThrow(AssignmentGone);
    expect(api.submissions).toHaveLength(1);
  });

  it("all terminal actions disabled locally after the deadline", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    await expect(ws.submitContribution(15.0)).rejects.toThrow(AssignmentGone);
    await expect(ws.skip(16.0)).rejects.toThrow(AssignmentGone);
    await expect(ws.reportIssue("x", 15.5)).rejects.toThrow(AssignmentGone);
    expect(api.submissions).toHaveLength(0);
    expect(api.skips).toHaveLength(0);
  });

  it("submit is permitted with failing tests", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    ws.addIoPairTest([], "pong");
    await ws.runTests();
    expect(ws.allGreen()).toBe(false);
    const submissionId = await ws.submitContribution(2.0);
    expect(submissionId).toBe("s-1");
    const body = api.submissions[0].body as { testReport?: unknown };
    expect(body.testReport).toBeDefined();
  });

  it("skip discards staged editor work", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    ws.codeBuffer = "half finished";
    ws.addIoPairTest([], "pong");
    await ws.skip(1.0);
    expect(ws.codeBuffer).toBe("");
    expect(ws.testsBuffer).toHaveLength(0);
    expect(api.skips).toEqual(["mt-1"]);
  });
});

describe("editor buffers", () => {
  it("buffers seed from the assigned function artifact", async () => {
    const { api, ws } = controller();
    const view = assignment();
    view.microtask.context.function.code = "return 1";
    view.microtask.context.function.stubs = [
      { calleeName: "g", argumentTuple: "[1]", returnValue: 2 },
    ];
    api.assignments = [view];
    await ws.fetchNext();
    expect(ws.codeBuffer).toBe("return 1");
    expect(ws.stubsBuffer).toHaveLength(1);
  });

  it("stub editor replaces an entry for the same call", async () => {
    const { api, ws } = controller();
    api.assignments = [assignment()];
    await ws.fetchNext();
    ws.addStub("g", [1, 2], 7);
    ws.addStub("g", [1, 2], 9);
    expect(ws.stubsBuffer).toHaveLength(1);
    expect(ws.stubsBuffer[0].returnValue).toBe(9);
    expect(ws.stubsBuffer[0].argumentTuple).toBe("[1,2]");
  });

  it("run-tests sends buffers plus existing artifact tests", async () => {
    const { api, ws } = controller();
    const view = assignment();
    view.microtask.context.function.tests = [
      { id: "t-old", kind: "io-pair", inputs: [], expectedOutput: "pong" },
    ];
    api.assignments = [view];
    await ws.fetchNext();
    ws.addIoPairTest([], "pong");
    ws.codeBuffer = 'return "pong"';
    await ws.runTests();
    const body = api.runBodies[0] as { tests: unknown[]; code: string };
    expect(body.tests).toHaveLength(2);
    expect(body.code).toBe('return "pong"');
  });

  it("rework feedback surfaces from the microtask", async () => {
    const { api, ws } = controller();
    const view = assignment();
    view.microtask.reworkFeedback = "cover the missing-todo case";
    api.assignments = [view];
    await ws.fetchNext();
    expect(ws.reworkFeedback).toBe("cover the missing-todo case");
  });
});

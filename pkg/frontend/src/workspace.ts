/**
 * View-model for the implement-behavior workspace: editor buffers, the
 * red/green test loop, the deadline countdown with its one-shot warning,
 * and exactly one terminal action per assignment.
 *
 * Deadlines mirror the server: the countdown is computed from the
 * assignment's deadline, terminal actions are disabled locally once it
 * passes (the server rejects them as stale anyway), and the warning fires
 * exactly once at the server-provided warningAt instant.
 */

import { WorkflowApi } from "./api";
import { canonicalize } from "./canonical";
import {
  AssignmentView,
  StubView,
  TestRunReportView,
  TestView,
} from "./types";

export class AssignmentGone extends Error {
  constructor(message: string) {
    super(message);
    this.name = "AssignmentGone";
  }
}

export interface NewFunctionDraft {
  name: string;
  description: string;
  params: { name: string; type: string }[];
  returnType: string;
}

export class WorkspaceController {
  assignment: AssignmentView | null = null;
  codeBuffer = "";
  testsBuffer: TestView[] = [];
  stubsBuffer: StubView[] = [];
  newFunctions: NewFunctionDraft[] = [];
  lastReport: TestRunReportView | null = null;
  private warningShown = false;
  private testCounter = 0;

  constructor(
    private readonly api: WorkflowApi,
    private readonly projectId: string,
  ) {}

  async fetchNext(): Promise<AssignmentView | null> {
    const assignment = await this.api.fetchMicrotask(this.projectId);
    this.assignment = assignment;
    this.warningShown = false;
    this.lastReport = null;
    this.testsBuffer = [];
    this.stubsBuffer = [];
    this.newFunctions = [];
    this.codeBuffer = "";
    if (assignment && assignment.microtask.kind === "implement-behavior") {
      const fn = assignment.microtask.context.function;
      this.codeBuffer = fn.code;
      this.stubsBuffer = [...fn.stubs];
    }
    return assignment;
  }

  get reworkFeedback(): string | null {
    return this.assignment?.microtask.reworkFeedback ?? null;
  }

  // ---- countdown ----

  countdownMinutes(nowMinutes: number): number {
    if (!this.assignment) {
      return 0;
    }
    return Math.max(0, this.assignment.deadline - nowMinutes);
  }

  expired(nowMinutes: number): boolean {
    return this.assignment !== null && nowMinutes >= this.assignment.deadline;
  }

  /** True exactly once, at or after the server's warning instant. */
  shouldWarn(nowMinutes: number): boolean {
    if (
      this.assignment &&
      !this.warningShown &&
      !this.expired(nowMinutes) &&
      nowMinutes >= this.assignment.warningAt
    ) {
      this.warningShown = true;
      return true;
    }
    return false;
  }

  // ---- editors ----

  addIoPairTest(inputs: unknown[], expectedOutput: unknown, description = ""): TestView {
    this.testCounter += 1;
    const test: TestView = {
      id: `draft-${this.testCounter}`,
      kind: "io-pair",
      inputs,
      expectedOutput,
      description,
    };
    this.testsBuffer.push(test);
    return test;
  }

  addCodeTest(source: string, description = ""): TestView {
    this.testCounter += 1;
    const test: TestView = { id: `draft-${this.testCounter}`, kind: "code", source, description };
    this.testsBuffer.push(test);
    return test;
  }

  /** Record (callee, args) -> value; replaces an existing entry exactly
   * like the stub editor's edit-the-output flow. */
  addStub(calleeName: string, args: unknown[], returnValue: unknown): StubView {
    const argumentTuple = canonicalize(args);
    const stub: StubView = { calleeName, argumentTuple, returnValue };
    this.stubsBuffer = this.stubsBuffer.filter(
      (s) => !(s.calleeName === calleeName && s.argumentTuple === argumentTuple),
    );
    this.stubsBuffer.push(stub);
    return stub;
  }

  addNewFunction(draft: NewFunctionDraft): void {
    this.newFunctions.push(draft);
  }

  // ---- the red/green loop ----

  async runTests(
    persistenceSeed?: { collection: string; id: string; value: unknown }[],
  ): Promise<TestRunReportView> {
    const assignment = this.requireAssignment();
    const report = await this.api.runTests(assignment.assignmentId, {
      code: this.codeBuffer,
      tests: this.allTests(),
      stubs: this.stubsBuffer,
      ...(persistenceSeed ? { persistenceSeed } : {}),
    });
    this.lastReport = report;
    return report;
  }

  allTests(): TestView[] {
    const existing = this.assignment?.microtask.context.function.tests ?? [];
    return [...existing, ...this.testsBuffer];
  }

  allGreen(): boolean {
    return (
      this.lastReport !== null &&
      this.lastReport.perTest.every((r) => r.status === "passed")
    );
  }

  // ---- terminal actions (exactly one per assignment) ----

  private requireAssignment(): AssignmentView {
    if (!this.assignment) {
      throw new AssignmentGone("no live assignment");
    }
    return this.assignment;
  }

  private requireActionable(nowMinutes: number): AssignmentView {
    const assignment = this.requireAssignment();
    if (nowMinutes >= assignment.deadline) {
      throw new AssignmentGone("the assignment deadline has passed");
    }
    return assignment;
  }

  async submitContribution(nowMinutes: number): Promise<string | undefined> {
    const assignment = this.requireActionable(nowMinutes);
    const body = {
      payload: {
        kind: "behavior-contribution",
        codeDiff: this.codeBuffer,
        testsAdded: this.testsBuffer,
        stubsAdded: this.stubsBuffer,
        newFunctions: this.newFunctions.map((f) => ({
          name: f.name,
          description: f.description,
          params: f.params,
          returnType: f.returnType,
        })),
      },
      ...(this.lastReport ? { testReport: this.lastReport } : {}),
    };
    const result = await this.api.submit(assignment.assignmentId, body);
    this.assignment = null;
    return result.submissionId;
  }

  async markComplete(nowMinutes: number): Promise<string | undefined> {
    const assignment = this.requireActionable(nowMinutes);
    const result = await this.api.submit(assignment.assignmentId, {
      payload: { kind: "mark-complete" },
    });
    this.assignment = null;
    return result.submissionId;
  }

  async reportIssue(text: string, nowMinutes: number): Promise<string | undefined> {
    const assignment = this.requireActionable(nowMinutes);
    const result = await this.api.submit(assignment.assignmentId, {
      payload: { kind: "issue-report", text },
    });
    this.assignment = null;
    return result.submissionId;
  }

  async skip(nowMinutes: number): Promise<void> {
    const assignment = this.requireActionable(nowMinutes);
    await this.api.skip(assignment.assignmentId);
    // staged editor work is discarded with the assignment
    this.assignment = null;
    this.codeBuffer = "";
    this.testsBuffer = [];
    this.stubsBuffer = [];
    this.newFunctions = [];
    this.lastReport = null;
  }
}

/** Shapes returned by the service routes (canonical-form JSON). */

export interface FunctionView {
  id: string;
  name: string;
  description: string;
  params: { name: string; type: string }[];
  returnType: string;
  state: string;
  code: string;
  tests: TestView[];
  stubs: StubView[];
  version: number;
}

export interface TestView {
  id: string;
  kind: "io-pair" | "code";
  description?: string;
  inputs?: unknown[];
  expectedOutput?: unknown;
  source?: string;
  authorWorkerId?: string;
}

export interface StubView {
  calleeName: string;
  argumentTuple: string;
  returnValue: unknown;
}

export interface MicrotaskView {
  id: string;
  kind: "implement-behavior" | "review";
  state: string;
  reworkFeedback?: string;
  context: {
    function: FunctionView;
    submission?: SubmissionView;
    previousVersion?: { code: string; version: number };
  };
}

export interface SubmissionView {
  id: string;
  microtaskId: string;
  workerId: string;
  payload: {
    kind: string;
    codeDiff?: string;
    testsAdded?: TestView[];
    stubsAdded?: StubView[];
    newFunctions?: unknown[];
    text?: string;
  };
}

export interface AssignmentView {
  assignmentId: string;
  deadline: number;
  warningAt: number;
  microtask: MicrotaskView;
}

export interface TraceView {
  expression: string;
  values: unknown[];
}

export interface TestResultView {
  testId: string;
  status: "passed" | "failed" | "errored";
  message?: string;
  traces: TraceView[];
  stubHits: { calleeName: string; argumentTuple: string }[];
  stubMisses: { calleeName: string; argumentTuple: string }[];
}

export interface TestRunReportView {
  bundleId: string;
  perTest: TestResultView[];
  persistenceFinalState: unknown[];
}

export interface DashboardView {
  projectId: string;
  projectName: string;
  projectDescription: string;
  functions: { id: string; name: string; description: string; state: string }[];
  availableMicrotasks: number;
  complete: boolean;
  leaderboard: LeaderboardRow[];
}

export interface LeaderboardRow {
  workerId: string;
  total: number;
}

export interface QuestionThread {
  question: { id: string; authorWorkerId: string; text: string; timestamp: number };
  answers: { id: string; authorWorkerId: string; text: string; timestamp: number }[];
}

export interface NotificationView {
  id: string;
  recipientWorkerId: string;
  kind: string;
  detail: Record<string, unknown>;
  projectId?: string;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  violations: string[];
}

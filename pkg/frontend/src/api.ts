/**
 * Typed client for the service routes. The UI fabricates no state: every
 * displayed count and score round-trips through these calls.
 */

import {
  AssignmentView,
  DashboardView,
  ErrorEnvelope,
  LeaderboardRow,
  NotificationView,
  QuestionThread,
  StubView,
  TestRunReportView,
  TestView,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly envelope: ErrorEnvelope,
  ) {
    super(envelope.message);
    this.name = "ApiError";
  }

  get code(): string {
    return this.envelope.code;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** The slice of the service the workspace and review controllers drive. */
export interface WorkflowApi {
  fetchMicrotask(projectId: string): Promise<AssignmentView | null>;
  runTests(
    assignmentId: string,
    body: {
      code?: string;
      tests?: TestView[];
      stubs?: StubView[];
      persistenceSeed?: { collection: string; id: string; value: unknown }[];
    },
  ): Promise<TestRunReportView>;
  submit(assignmentId: string, body: unknown): Promise<{ submissionId?: string }>;
  skip(assignmentId: string): Promise<{ skipped: boolean }>;
}

export class ServiceClient implements WorkflowApi {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body === undefined ? {} : { "Content-Type": "application/json" }),
      },
      ...(body === undefined ? {} : { body: JSON.stringify(body) }),
    });
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const envelope: ErrorEnvelope =
        parsed && typeof parsed === "object" && "code" in parsed
          ? (parsed as ErrorEnvelope)
          : { code: "http-error", message: `HTTP ${response.status}`, violations: [] };
      throw new ApiError(response.status, envelope);
    }
    return parsed as T;
  }

  createProject(clientRequest: unknown, projectId?: string): Promise<{ projectId: string }> {
    return this.request("POST", "/projects", { clientRequest, projectId });
  }

  dashboard(projectId: string): Promise<DashboardView> {
    return this.request("GET", `/projects/${projectId}/dashboard`);
  }

  async fetchMicrotask(projectId: string): Promise<AssignmentView | null> {
    const data = await this.request<{ assignment: AssignmentView | null }>(
      "POST",
      `/projects/${projectId}/microtasks/fetch`,
    );
    return data.assignment;
  }

  runTests(
    assignmentId: string,
    body: {
      code?: string;
      tests?: TestView[];
      stubs?: StubView[];
      persistenceSeed?: { collection: string; id: string; value: unknown }[];
    },
  ): Promise<TestRunReportView> {
    return this.request("POST", `/assignments/${assignmentId}/run-tests`, body);
  }

  submit(assignmentId: string, body: unknown): Promise<{ submissionId?: string }> {
    return this.request("POST", `/assignments/${assignmentId}/submit`, body);
  }

  skip(assignmentId: string): Promise<{ skipped: boolean }> {
    return this.request("POST", `/assignments/${assignmentId}/skip`, {});
  }

  async leaderboard(projectId: string): Promise<LeaderboardRow[]> {
    const data = await this.request<{ leaderboard: LeaderboardRow[] }>(
      "GET",
      `/projects/${projectId}/leaderboard`,
    );
    return data.leaderboard;
  }

  postQuestion(projectId: string, text: string): Promise<{ questionId: string }> {
    return this.request("POST", `/projects/${projectId}/questions`, { text });
  }

  postAnswer(questionId: string, projectId: string, text: string): Promise<{ answerId: string }> {
    return this.request("POST", `/questions/${questionId}/answers`, { projectId, text });
  }

  async questions(projectId: string): Promise<QuestionThread[]> {
    const data = await this.request<{ threads: QuestionThread[] }>(
      "GET",
      `/projects/${projectId}/questions`,
    );
    return data.threads;
  }

  async notifications(workerId: string): Promise<NotificationView[]> {
    const data = await this.request<{ notifications: NotificationView[] }>(
      "GET",
      `/workers/${workerId}/notifications`,
    );
    return data.notifications;
  }

  status(projectId: string): Promise<{ complete: boolean }> {
    return this.request("GET", `/projects/${projectId}/status`);
  }
}

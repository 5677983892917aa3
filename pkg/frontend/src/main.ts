/**
 * Browser wiring: one-page client over the service API.
 *
 * The server is the source of truth; the only optimistic state is the
 * editor buffers. Screens: dashboard (+ leaderboard, Q&A, notifications),
 * the implement-behavior workspace, and the review pane.
 */

import { ApiError, ServiceClient } from "./api";
import { ReviewController } from "./review";
import { AssignmentView } from "./types";
import {
  escapeHtml,
  renderCountdown,
  renderDashboard,
  renderDiff,
  renderLeaderboard,
  renderNotifications,
  renderQuestions,
  renderReport,
  renderStars,
} from "./views";
import { WorkspaceController, AssignmentGone } from "./workspace";

const nowMinutes = (): number => Date.now() / 60000;

interface Session {
  api: ServiceClient;
  workerId: string;
  projectId: string;
}

let session: Session | null = null;
let workspace: WorkspaceController | null = null;
let review: ReviewController | null = null;
let countdownTimer: number | undefined;

const root = (): HTMLElement => document.getElementById("app")!;
const panel = (): HTMLElement => document.getElementById("side")!;

function showError(err: unknown): void {
  const box = document.getElementById("errors")!;
  if (err instanceof ApiError) {
    const violations = err.envelope.violations.map((v) => `<li>${escapeHtml(v)}</li>`);
    box.innerHTML = `<p>${escapeHtml(err.message)}</p><ul>${violations.join("")}</ul>`;
  } else if (err instanceof AssignmentGone) {
    box.innerHTML = `<p>${escapeHtml(err.message)}; returning to the dashboard.</p>`;
  } else {
    box.innerHTML = `<p>${escapeHtml(String(err))}</p>`;
  }
  box.classList.add("visible");
  window.setTimeout(() => box.classList.remove("visible"), 6000);
}

async function showDashboard(): Promise<void> {
  if (!session) return;
  window.clearInterval(countdownTimer);
  const { api, projectId, workerId } = session;
  const [dashboard, threads, notes] = await Promise.all([
    api.dashboard(projectId),
    api.questions(projectId),
    api.notifications(workerId),
  ]);
  root().innerHTML = renderDashboard(dashboard);
  panel().innerHTML =
    renderLeaderboard(dashboard.leaderboard) +
    renderQuestions(threads) +
    renderNotifications(notes);
  document.getElementById("fetch-microtask")!.addEventListener("click", () => {
    void fetchMicrotask();
  });
  document.getElementById("ask-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = (event.target as HTMLFormElement).elements.namedItem(
      "text",
    ) as HTMLInputElement;
    if (input.value.trim()) {
      void api.postQuestion(projectId, input.value).then(showDashboard, showError);
    }
  });
  for (const button of Array.from(document.querySelectorAll("button.answer"))) {
    button.addEventListener("click", () => {
      const questionId = (button as HTMLElement).dataset.question!;
      const text = window.prompt("Your answer:");
      if (text && text.trim()) {
        void api.postAnswer(questionId, projectId, text).then(showDashboard, showError);
      }
    });
  }
}

const TUTORIALS: Record<string, string> = {
  "implement-behavior":
    "Identify one behavior from the function's description, write a test" +
    " that fails, implement the behavior, then run the tests again. Stub any" +
    " call to a function that does not exist yet. You can submit incomplete" +
    " work; a reviewer will leave feedback.",
  review:
    "Read the description, the diff against the previous version, and the" +
    " tests. Rate 1-5 stars: 4 or 5 accepts the contribution as is, 3 or" +
    " fewer sends it back for rework with your feedback.",
};

/** Show each microtask type's tutorial once, tracked in client storage. */
function maybeShowTutorial(kind: string): void {
  const key = `tutorial-seen:${kind}`;
  try {
    if (window.localStorage.getItem(key)) {
      return;
    }
    window.localStorage.setItem(key, "1");
  } catch {
    return; // storage unavailable; skip tracking
  }
  const text = TUTORIALS[kind];
  if (text) {
    window.alert(`First ${kind} microtask.\n\n${text}`);
  }
}

async function fetchMicrotask(): Promise<void> {
  if (!session) return;
  workspace = new WorkspaceController(session.api, session.projectId);
  try {
    const assignment = await workspace.fetchNext();
    if (!assignment) {
      showError(new Error("no microtask available right now; try again shortly"));
      return;
    }
    maybeShowTutorial(assignment.microtask.kind);
    if (assignment.microtask.kind === "review") {
      review = new ReviewController(session.api, assignment);
      showReview(assignment);
    } else {
      showWorkspace(assignment);
    }
  } catch (err) {
    showError(err);
  }
}

function showWorkspace(assignment: AssignmentView): void {
  const fn = assignment.microtask.context.function;
  const rework = assignment.microtask.reworkFeedback;
  const params = fn.params.map((p) => `${p.name}: ${p.type}`).join(", ");
  root().innerHTML = `
    <section class="workspace">
      <header>
        <h1>Implement a behavior of <code>${escapeHtml(fn.name)}</code></h1>
        <div id="countdown-slot"></div>
      </header>
      ${rework ? `<div class="rework">Reviewer feedback to address: ${escapeHtml(rework)}</div>` : ""}
      <p class="signature"><code>${escapeHtml(fn.name)}(${escapeHtml(params)})
        → ${escapeHtml(fn.returnType)}</code></p>
      <p class="description">${escapeHtml(fn.description)}</p>
      <label>Function body
        <textarea id="code" rows="12" spellcheck="false">${escapeHtml(
          workspace!.codeBuffer,
        )}</textarea>
      </label>
      <div class="editors">
        <form id="test-form">
          <h3>Add an input/output test</h3>
          <input name="inputs" placeholder='inputs as JSON list, e.g. ["u1"]' />
          <input name="expected" placeholder='expected output as JSON' />
          <button type="submit">Add test</button>
        </form>
        <form id="stub-form">
          <h3>Stub a call</h3>
          <input name="callee" placeholder="function name" />
          <input name="args" placeholder='arguments as JSON list' />
          <input name="value" placeholder="intended output as JSON" />
          <button type="submit">Record stub</button>
        </form>
      </div>
      <div class="actions">
        <button id="run-tests">Run tests</button>
        <button id="submit">Submit</button>
        <button id="mark-complete">Mark function as completed</button>
        <button id="report-issue">Report an issue</button>
        <button id="skip">Skip</button>
      </div>
      <div id="report-slot">${renderReport(null)}</div>
    </section>
  `;
  const codeArea = document.getElementById("code") as HTMLTextAreaElement;
  codeArea.addEventListener("input", () => {
    workspace!.codeBuffer = codeArea.value;
  });

  const tick = (): void => {
    const now = nowMinutes();
    const slot = document.getElementById("countdown-slot");
    if (!slot || !workspace) return;
    if (workspace.shouldWarn(now)) {
      slot.innerHTML = renderCountdown(workspace.countdownMinutes(now), true);
    } else if (workspace.expired(now)) {
      window.clearInterval(countdownTimer);
      showError(new AssignmentGone("time expired; the microtask was skipped"));
      void showDashboard();
    } else if (!slot.querySelector(".warning")) {
      slot.innerHTML = renderCountdown(workspace.countdownMinutes(now), false);
    }
  };
  window.clearInterval(countdownTimer);
  countdownTimer = window.setInterval(tick, 1000);
  tick();

  const guard = (action: () => Promise<unknown>) => (): void => {
    action()
      .then(() => showDashboard())
      .catch((err) => {
        showError(err);
        if (err instanceof AssignmentGone || (err instanceof ApiError && err.status === 409)) {
          void showDashboard();
        }
      });
  };
  document.getElementById("test-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    try {
      const inputs = JSON.parse((form.elements.namedItem("inputs") as HTMLInputElement).value);
      const expected = JSON.parse(
        (form.elements.namedItem("expected") as HTMLInputElement).value,
      );
      workspace!.addIoPairTest(inputs, expected);
      form.reset();
    } catch (err) {
      showError(err);
    }
  });
  document.getElementById("stub-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    try {
      workspace!.addStub(
        (form.elements.namedItem("callee") as HTMLInputElement).value,
        JSON.parse((form.elements.namedItem("args") as HTMLInputElement).value),
        JSON.parse((form.elements.namedItem("value") as HTMLInputElement).value),
      );
      form.reset();
    } catch (err) {
      showError(err);
    }
  });
  document.getElementById("run-tests")!.addEventListener("click", () => {
    workspace!
      .runTests()
      .then((report) => {
        document.getElementById("report-slot")!.innerHTML = renderReport(report);
      })
      .catch(showError);
  });
  document
    .getElementById("submit")!
    .addEventListener("click", guard(() => workspace!.submitContribution(nowMinutes())));
  document
    .getElementById("mark-complete")!
    .addEventListener("click", guard(() => workspace!.markComplete(nowMinutes())));
  document.getElementById("report-issue")!.addEventListener(
    "click",
    guard(() => {
      const text = window.prompt("Describe the issue with this function:") ?? "";
      if (!text.trim()) {
        return Promise.resolve();
      }
      return workspace!.reportIssue(text, nowMinutes());
    }),
  );
  document
    .getElementById("skip")!
    .addEventListener("click", guard(() => workspace!.skip(nowMinutes())));
}

function showReview(assignment: AssignmentView): void {
  const fn = assignment.microtask.context.function;
  const submission = assignment.microtask.context.submission!;
  const tests = (submission.payload.testsAdded ?? [])
    .map(
      (t) =>
        `<li><code>${escapeHtml(JSON.stringify(t.inputs ?? t.source))}</code>
         → <code>${escapeHtml(JSON.stringify(t.expectedOutput ?? null))}</code></li>`,
    )
    .join("");
  const render = (): void => {
    root().innerHTML = `
      <section class="review">
        <header>
          <h1>Review a contribution to <code>${escapeHtml(fn.name)}</code></h1>
          <div id="countdown-slot"></div>
        </header>
        <p class="description">${escapeHtml(fn.description)}</p>
        <h3>Diff against version ${fn.version}</h3>
        ${renderDiff(review!.diff())}
        <h3>Tests added</h3>
        <ul class="tests">${tests || "<li>none</li>"}</ul>
        <div class="rating">
          <div class="stars">${renderStars(review!.stars)}</div>
          <textarea id="feedback" placeholder="Feedback (required for 3 stars or fewer)"
            rows="3">${escapeHtml(review!.feedback)}</textarea>
          <p class="validation">${escapeHtml(review!.validationError() ?? "")}</p>
          <button id="post-review" ${review!.canSubmit() ? "" : "disabled"}>
            Submit review</button>
        </div>
      </section>
    `;
    for (const star of Array.from(document.querySelectorAll("button.star"))) {
      star.addEventListener("click", () => {
        review!.setStars(Number((star as HTMLElement).dataset.stars));
        render();
      });
    }
    const feedback = document.getElementById("feedback") as HTMLTextAreaElement;
    feedback.addEventListener("input", () => {
      review!.setFeedback(feedback.value);
      document.querySelector(".validation")!.textContent =
        review!.validationError() ?? "";
      (document.getElementById("post-review") as HTMLButtonElement).disabled =
        !review!.canSubmit();
    });
    document.getElementById("post-review")!.addEventListener("click", () => {
      review!
        .submit(nowMinutes())
        .then(() => showDashboard())
        .catch(showError);
    });
  };
  render();
}

function boot(): void {
  const form = document.getElementById("login-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const base = (form.elements.namedItem("base") as HTMLInputElement).value;
    const workerId = (form.elements.namedItem("worker") as HTMLInputElement).value;
    const projectId = (form.elements.namedItem("project") as HTMLInputElement).value;
    session = {
      api: new ServiceClient(base.replace(/\/$/, ""), `worker:${workerId}`),
      workerId,
      projectId,
    };
    document.getElementById("login")!.classList.add("hidden");
    void showDashboard().catch(showError);
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}

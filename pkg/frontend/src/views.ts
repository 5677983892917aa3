/** HTML renderers; pure functions from view data to markup. */

import { DiffRow } from "./diff";
import {
  DashboardView,
  NotificationView,
  QuestionThread,
  TestResultView,
  TestRunReportView,
} from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderDashboard(data: DashboardView): string {
  const functions = data.functions
    .map(
      (f) => `
      <li class="function ${f.state}">
        <span class="name">${escapeHtml(f.name)}</span>
        <span class="state">${escapeHtml(f.state)}</span>
        <p>${escapeHtml(f.description)}</p>
      </li>`,
    )
    .join("");
  return `
    <section class="dashboard">
      <h1>${escapeHtml(data.projectName)}</h1>
      <p class="description">${escapeHtml(data.projectDescription)}</p>
      <p class="available">
        <strong data-testid="available">${data.availableMicrotasks}</strong>
        microtask(s) available
        ${data.complete ? '<span class="complete">project complete</span>' : ""}
      </p>
      <button id="fetch-microtask">Fetch a Microtask</button>
      <h2>Functions</h2>
      <ul class="functions">${functions}</ul>
    </section>
  `;
}

export function renderLeaderboard(rows: { workerId: string; total: number }[]): string {
  const body = rows
    .map(
      (row, index) => `
      <tr><td>${index + 1}</td><td>${escapeHtml(row.workerId)}</td>
      <td>${row.total}</td></tr>`,
    )
    .join("");
  return `
    <section class="leaderboard">
      <h2>Leaderboard</h2>
      <table><thead><tr><th>#</th><th>Worker</th><th>Points</th></tr></thead>
      <tbody>${body}</tbody></table>
    </section>
  `;
}

export function renderCountdown(remainingMinutes: number, warned: boolean): string {
  const minutes = Math.floor(remainingMinutes);
  const seconds = Math.floor((remainingMinutes - minutes) * 60);
  const clock = `${minutes}:${String(seconds).padStart(2, "0")}`;
  return `
    <div class="countdown ${warned ? "warning" : ""}" data-testid="countdown">
      ${clock} remaining
      ${warned ? "<strong>try to submit within a minute, or the task will be skipped</strong>" : ""}
    </div>
  `;
}

export function renderReport(report: TestRunReportView | null): string {
  if (!report) {
    return '<div class="report empty">No test run yet.</div>';
  }
  const rows = report.perTest.map(renderTestResult).join("");
  return `<div class="report"><h3>Test run</h3><ul>${rows}</ul></div>`;
}

function renderTestResult(result: TestResultView): string {
  const traces = result.traces
    .map(
      (t) => `
      <li class="trace" title="observed values">
        <code>${escapeHtml(t.expression)}</code> →
        <code>${escapeHtml(JSON.stringify(t.values))}</code>
      </li>`,
    )
    .join("");
  const misses = result.stubMisses
    .map(
      (m) => `
      <li class="stub-miss">no stub for
        <code>${escapeHtml(m.calleeName)}(${escapeHtml(m.argumentTuple)})</code>
        — add one in the stub editor</li>`,
    )
    .join("");
  return `
    <li class="test ${result.status}">
      <span class="id">${escapeHtml(result.testId)}</span>
      <span class="status">${result.status}</span>
      ${result.message ? `<p class="message">${escapeHtml(result.message)}</p>` : ""}
      <ul class="traces">${traces}</ul>
      <ul class="misses">${misses}</ul>
    </li>
  `;
}

export function renderDiff(rows: DiffRow[]): string {
  const body = rows
    .map(
      (row) => `
      <tr class="${row.kind}">
        <td class="line">${row.oldLine ?? ""}</td>
        <td class="line">${row.newLine ?? ""}</td>
        <td class="marker">${row.kind === "added" ? "+" : row.kind === "removed" ? "-" : ""}</td>
        <td class="text"><code>${escapeHtml(row.text)}</code></td>
      </tr>`,
    )
    .join("");
  return `<table class="diff"><tbody>${body}</tbody></table>`;
}

export function renderQuestions(threads: QuestionThread[]): string {
  const body = threads
    .map(
      (thread) => `
      <li class="thread">
        <p class="question"><strong>${escapeHtml(thread.question.authorWorkerId)}</strong>:
          ${escapeHtml(thread.question.text)}</p>
        <ul class="answers">
          ${thread.answers
            .map(
              (a) =>
                `<li><strong>${escapeHtml(a.authorWorkerId)}</strong>: ${escapeHtml(a.text)}</li>`,
            )
            .join("")}
        </ul>
        <button class="answer" data-question="${escapeHtml(thread.question.id)}">Answer</button>
      </li>`,
    )
    .join("");
  return `
    <section class="questions">
      <h2>Questions &amp; Answers</h2>
      <form id="ask-form"><input name="text" placeholder="Ask the crowd..." />
      <button type="submit">Post</button></form>
      <ul>${body}</ul>
    </section>
  `;
}

export function renderNotifications(notes: NotificationView[]): string {
  const body = notes
    .map((n) => {
      if (n.kind === "review-received") {
        const stars = Number(n.detail.stars ?? 0);
        const feedback = String(n.detail.feedback ?? "");
        return `<li class="note review">reviewed: ${"★".repeat(stars)}${"☆".repeat(5 - stars)}
          ${feedback ? `— ${escapeHtml(feedback)}` : ""}</li>`;
      }
      if (n.kind === "time-warning") {
        return `<li class="note warning">time is almost up on your current microtask</li>`;
      }
      return `<li class="note">${escapeHtml(n.kind)}</li>`;
    })
    .join("");
  return `<section class="notifications"><h2>Notifications</h2><ul>${body}</ul></section>`;
}

export function renderStars(selected: number | null): string {
  return [1, 2, 3, 4, 5]
    .map(
      (n) => `
      <button class="star ${selected !== null && n <= selected ? "on" : ""}"
              data-stars="${n}" aria-label="${n} star${n > 1 ? "s" : ""}">
        ${selected !== null && n <= selected ? "★" : "☆"}
      </button>`,
    )
    .join("");
}

/**
 * View-model for the review pane: the client-side diff between the
 * previous version and the submitted code, the 1-5 star choice, and the
 * feedback rule (required at 3 stars or fewer).
 */

import { WorkflowApi } from "./api";
import { DiffRow, diffLines } from "./diff";
import { AssignmentView } from "./types";

export class ReviewController {
  stars: number | null = null;
  feedback = "";

  constructor(
    private readonly api: WorkflowApi,
    public readonly assignment: AssignmentView,
  ) {
    if (assignment.microtask.kind !== "review") {
      throw new Error("not a review assignment");
    }
  }

  get submittedCode(): string {
    return this.assignment.microtask.context.submission?.payload.codeDiff ?? "";
  }

  get previousCode(): string {
    return this.assignment.microtask.context.previousVersion?.code ?? "";
  }

  diff(): DiffRow[] {
    return diffLines(this.previousCode, this.submittedCode);
  }

  setStars(stars: number): void {
    if (!Number.isInteger(stars) || stars < 1 || stars > 5) {
      throw new RangeError("stars must be an integer from 1 to 5");
    }
    this.stars = stars;
  }

  setFeedback(text: string): void {
    this.feedback = text;
  }

  /** Inline validation message, or null when the decision may be posted. */
  validationError(): string | null {
    if (this.stars === null) {
      return "choose a rating from 1 to 5 stars";
    }
    if (this.stars <= 3 && this.feedback.trim().length === 0) {
      return "feedback is required for ratings of 3 stars or fewer";
    }
    return null;
  }

  canSubmit(): boolean {
    return this.validationError() === null;
  }

  async submit(nowMinutes: number): Promise<void> {
    const error = this.validationError();
    if (error) {
      throw new Error(error);
    }
    if (nowMinutes >= this.assignment.deadline) {
      throw new Error("the assignment deadline has passed");
    }
    await this.api.submit(this.assignment.assignmentId, {
      stars: this.stars,
      feedback: this.feedback,
    });
  }
}

/**
 * Line diff for the review pane, computed client-side from the two
 * versions the service returns (the server stores versions, not diffs).
 */

export interface DiffRow {
  kind: "context" | "added" | "removed";
  text: string;
  oldLine?: number;
  newLine?: number;
}

export function diffLines(oldText: string, newText: string): DiffRow[] {
  const a = oldText.length ? oldText.split("\n") : [];
  const b = newText.length ? newText.split("\n") : [];

  // Longest common subsequence table.
  const m = a.length;
  const n = b.length;
  const lcs: number[][] = Array.from({ length: m + 1 }, () =>
    new Array<number>(n + 1).fill(0),
  );
  for (let i = m - 1; i >= 0; i--) {
    for (let j = n - 1; j >= 0; j--) {
      lcs[i][j] =
        a[i] === b[j]
          ? lcs[i + 1][j + 1] + 1
          : Math.max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  const rows: DiffRow[] = [];
  let i = 0;
  let j = 0;
  while (i < m && j < n) {
    if (a[i] === b[j]) {
      rows.push({ kind: "context", text: a[i], oldLine: i + 1, newLine: j + 1 });
      i++;
      j++;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      rows.push({ kind: "removed", text: a[i], oldLine: i + 1 });
      i++;
    } else {
      rows.push({ kind: "added", text: b[j], newLine: j + 1 });
      j++;
    }
  }
  while (i < m) {
    rows.push({ kind: "removed", text: a[i], oldLine: i + 1 });
    i++;
  }
  while (j < n) {
    rows.push({ kind: "added", text: b[j], newLine: j + 1 });
    j++;
  }
  return rows;
}

export function diffStats(rows: DiffRow[]): { added: number; removed: number } {
  let added = 0;
  let removed = 0;
  for (const row of rows) {
    if (row.kind === "added") added++;
    if (row.kind === "removed") removed++;
  }
  return { added, removed };
}

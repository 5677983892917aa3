#!/usr/bin/env node
/**
 * Builds the shared wire-protocol conformance fixtures.
 *
 * Each case is run through the executor once; its semantic outcome
 * (statuses, stub hits/misses, key message text) is asserted here, by
 * hand-derived expectation, before the full response is frozen. The test
 * suites (TypeScript and the engine's integration suite) then require
 * byte-for-byte equality against the frozen responses.
 */

const assert = require("node:assert");
const fs = require("node:fs");
const path = require("node:path");

const { runBundle } = require("../dist/executor");
const { canonicalize } = require("../dist/canonical");

const VALID_DATE = "01/07/26,10:00";
const T1 = { id: "t1", userId: "u1", title: "buy milk" };

function bundle(id, overrides) {
  return Object.assign(
    {
      bundleId: id,
      functions: [],
      entryFunction: "main",
      tests: [],
      stubs: [],
      persistenceSeed: [],
      limits: { wallTimeSeconds: 2, outputBytes: 65536 },
    },
    overrides,
  );
}

const cases = [];

function define(name, request, check) {
  const response = runBundle(request);
  check(response);
  cases.push({ name, request, expectedResponse: response });
}

define(
  "io-pair-passes",
  bundle("c-pass", {
    functions: [{ name: "main", params: ["a", "b"], source: "return a + b;" }],
    tests: [{ id: "t1", kind: "io-pair", inputs: [2, 3], expectedOutput: 5, description: "adds" }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
  },
);

define(
  "io-pair-red-first-on-empty-body",
  bundle("c-red", {
    functions: [{ name: "main", params: ["a"], source: "" }],
    tests: [{ id: "t1", kind: "io-pair", inputs: [1], expectedOutput: 2, description: "" }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "failed");
    assert.match(r.perTest[0].message, /expected 2, got null/);
  },
);

define(
  "stub-hit-on-unimplemented-callee",
  bundle("c-stub-hit", {
    functions: [
      {
        name: "main",
        params: ["dueDate"],
        source: "return checkTodoDateFormat(dueDate);",
      },
      { name: "checkTodoDateFormat", params: ["dateText"], source: "" },
    ],
    tests: [{ id: "t1", kind: "io-pair", inputs: [VALID_DATE], expectedOutput: true, description: "" }],
    stubs: [
      { calleeName: "checkTodoDateFormat", argumentTuple: canonicalize([VALID_DATE]), returnValue: true },
    ],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    assert.deepEqual(r.perTest[0].stubHits, [
      { calleeName: "checkTodoDateFormat", argumentTuple: canonicalize([VALID_DATE]) },
    ]);
  },
);

define(
  "stub-miss-errors-test",
  bundle("c-stub-miss", {
    functions: [
      { name: "main", params: ["dueDate"], source: "return checkTodoDateFormat(dueDate);" },
      { name: "checkTodoDateFormat", params: ["dateText"], source: "" },
    ],
    tests: [{ id: "t1", kind: "io-pair", inputs: [VALID_DATE], expectedOutput: true, description: "" }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "errored");
    assert.deepEqual(r.perTest[0].stubMisses, [
      { calleeName: "checkTodoDateFormat", argumentTuple: canonicalize([VALID_DATE]) },
    ]);
  },
);

define(
  "stub-intercepts-implemented-callee",
  bundle("c-stub-over-real", {
    functions: [
      { name: "main", params: [], source: "return double(4);" },
      { name: "double", params: ["n"], source: "return n * 2;" },
    ],
    tests: [
      { id: "intercepted", kind: "io-pair", inputs: [], expectedOutput: 99, description: "" },
    ],
    stubs: [{ calleeName: "double", argumentTuple: canonicalize([4]), returnValue: 99 }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    assert.equal(r.perTest[0].stubHits.length, 1);
  },
);

define(
  "stub-falls-through-to-real-on-other-args",
  bundle("c-stub-fallthrough", {
    functions: [
      { name: "main", params: [], source: "return double(5);" },
      { name: "double", params: ["n"], source: "return n * 2;" },
    ],
    tests: [{ id: "real", kind: "io-pair", inputs: [], expectedOutput: 10, description: "" }],
    stubs: [{ calleeName: "double", argumentTuple: canonicalize([4]), returnValue: 99 }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    assert.equal(r.perTest[0].stubHits.length, 0);
    assert.equal(r.perTest[0].stubMisses.length, 0);
  },
);

define(
  "persistence-seed-order-and-reset",
  bundle("c-persistence", {
    functions: [
      {
        name: "main",
        params: [],
        source: "save('todos', 't9', { id: 't9' });\nreturn list('todos');",
      },
      { name: "observer", params: [], source: "return list('todos');" },
    ],
    tests: [
      {
        id: "writes",
        kind: "io-pair",
        inputs: [],
        expectedOutput: [T1, { id: "t9" }],
        description: "sees its own write",
      },
      {
        id: "fresh-store",
        kind: "io-pair",
        inputs: [],
        expectedOutput: [T1, { id: "t9" }],
        description: "second run starts from the seed again",
      },
    ],
    persistenceSeed: [{ collection: "todos", id: "t1", value: T1 }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    assert.equal(r.perTest[1].status, "passed");
    assert.deepEqual(r.persistenceFinalState.map((e) => e.id), ["t1", "t9"]);
  },
);

define(
  "update-absent-id-is-an-error",
  bundle("c-update-absent", {
    functions: [
      { name: "main", params: [], source: "return update('todos', 'missing', { id: 'x' });" },
    ],
    tests: [{ id: "t1", kind: "io-pair", inputs: [], expectedOutput: null, description: "" }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "errored");
    assert.match(r.perTest[0].message, /no document todos\/missing/);
  },
);

define(
  "type-error-illegal-argument-surfaced",
  bundle("c-type-error", {
    functions: [
      {
        name: "main",
        params: ["dueDate"],
        source:
          "if (dueDate !== '01/07/26,10:00') { throw new TypeError('Illegal Argument Exception'); }\nreturn true;",
      },
    ],
    tests: [
      { id: "bad-format", kind: "io-pair", inputs: ["99/99/99"], expectedOutput: true, description: "" },
    ],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "errored");
    assert.equal(r.perTest[0].message, "TypeError: Illegal Argument Exception");
  },
);

define(
  "infinite-loop-times-out",
  bundle("c-timeout", {
    functions: [{ name: "main", params: [], source: "while (true) {}" }],
    tests: [{ id: "t1", kind: "io-pair", inputs: [], expectedOutput: null, description: "" }],
    limits: { wallTimeSeconds: 0.2, outputBytes: 65536 },
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "errored");
    assert.equal(r.perTest[0].message, "execution timed out (wall-time limit)");
  },
);

define(
  "code-test-assertions",
  bundle("c-code-test", {
    functions: [{ name: "double", params: ["n"], source: "return n * 2;" }],
    entryFunction: "double",
    tests: [
      { id: "green", kind: "code", source: "assertEquals(double(3), 6);", description: "" },
      { id: "red", kind: "code", source: "assertEquals(double(3), 7);", description: "" },
    ],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    assert.equal(r.perTest[1].status, "failed");
    assert.match(r.perTest[1].message, /expected 7, got 6/);
  },
);

define(
  "traces-observe-declarations-calls-and-return",
  bundle("c-traces", {
    functions: [
      {
        name: "main",
        params: ["n"],
        source: "const doubled = double(n);\nreturn doubled + 1;",
      },
      { name: "double", params: ["n"], source: "return n * 2;" },
    ],
    tests: [{ id: "t1", kind: "io-pair", inputs: [4], expectedOutput: 9, description: "" }],
  }),
  (r) => {
    assert.equal(r.perTest[0].status, "passed");
    const expressions = r.perTest[0].traces.map((t) => t.expression);
    assert.ok(expressions.includes("double(4)"));
    assert.ok(expressions.includes("doubled"));
    assert.ok(expressions.includes("return"));
  },
);

const out = path.join(__dirname, "..", "fixtures", "conformance.json");
fs.writeFileSync(out, JSON.stringify({ cases }, null, 2) + "\n");
console.log(`wrote ${cases.length} cases to ${out}`);

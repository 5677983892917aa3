/**
 * Runs one bundle: compiles the crowd-authored function bodies inside a
 * fresh VM realm per test, installs the stub-interception call shim and
 * the five persistence calls, executes io-pair and code tests under the
 * bundle's wall-time budget, and collects traces and stub hits/misses.
 *
 * Interception matches the engine's rule exactly: an exact stub match on
 * the canonical argument list always wins (implemented or not); with no
 * match an implemented callee is called for real and an unimplemented one
 * is a recorded stub miss that errors the test. The entry function itself
 * is invoked directly, not through the shim.
 *
 * The VM realm gives authored code its own globals and no require/process
 * bindings; it is an isolation convenience, not a hardened security
 * boundary.
 */

import * as vm from "node:vm";

import { canonicalize, CanonicalizationError } from "./canonical";
import { DocumentStore } from "./store";
import {
  BundleTest,
  SeedEntry,
  StubTouch,
  TestResult,
  Trace,
  WireBundle,
  WireReport,
} from "./types";

const MAX_CALL_DEPTH = 16;
const TIMEOUT_MESSAGE = "execution timed out (wall-time limit)";

// Names the realm provides on its own global (JSON, Math, Object, ...);
// those always resolve to the realm's intrinsics, never to shims.
const REALM_INTRINSICS = new Set<string>(
  vm.runInNewContext("Object.getOwnPropertyNames(globalThis)") as string[],
);

const JS_KEYWORDS = new Set([
  "if", "for", "while", "switch", "catch", "function", "return", "typeof",
  "new", "delete", "void", "in", "of", "do", "else", "try", "finally",
  "throw", "case", "break", "continue", "var", "let", "const", "class",
  "extends", "super", "this", "yield", "await", "async", "instanceof",
]);

/**
 * Every identifier that appears in call position anywhere in the sources.
 * Each one gets an interception shim, so calling a function that exists
 * nowhere in the bundle is a recorded stub miss instead of a bare
 * ReferenceError.
 */
function candidateCallees(sources: string[]): Set<string> {
  const names = new Set<string>();
  const callSite = /\b([A-Za-z_$][A-Za-z0-9_$]*)\s*\(/g;
  for (const source of sources) {
    for (const match of source.matchAll(callSite)) {
      const name = match[1];
      if (!JS_KEYWORDS.has(name) && !REALM_INTRINSICS.has(name)) {
        names.add(name);
      }
    }
  }
  return names;
}

class AssertionFailure extends Error {
  constructor(message: string) {
    super(message);
    this.name = "AssertionFailure";
  }
}

class StubMissError extends Error {
  constructor(callee: string, argumentTuple: string) {
    super(
      `call to unimplemented function ${callee} with no matching stub` +
        ` for arguments ${argumentTuple}`,
    );
    this.name = "StubMissError";
  }
}

/** JSON round-trip: detaches realm prototypes and normalizes undefined. */
function cloneValue(value: unknown): unknown {
  if (value === undefined || value === null) {
    return null;
  }
  return JSON.parse(canonicalize(value));
}

function expressionFor(callee: string, argumentTuple: string): string {
  return `${callee}(${argumentTuple.slice(1, -1)})`;
}

class TraceCollector {
  private order: string[] = [];
  private values = new Map<string, unknown[]>();
  private budget: number;

  constructor(budget: number) {
    this.budget = budget;
  }

  record(expression: string, value: unknown): void {
    let rendered: string;
    try {
      rendered = canonicalize(value);
    } catch {
      rendered = '"<uncanonical>"';
      value = "<uncanonical>";
    }
    const cost = expression.length + rendered.length;
    if (this.budget - cost < 0) {
      return; // output budget exhausted; drop further traces
    }
    this.budget -= cost;
    if (!this.values.has(expression)) {
      this.order.push(expression);
      this.values.set(expression, []);
    }
    this.values.get(expression)!.push(JSON.parse(rendered));
  }

  toList(): Trace[] {
    return this.order.map((expression) => ({
      expression,
      values: this.values.get(expression)!,
    }));
  }
}

interface TestRun {
  result: TestResult;
  elapsedMs: number;
}

/**
 * Instrument single-line let/const/var declarations so their values are
 * observable; falls back to the raw body when injection breaks syntax.
 */
function instrumentBody(body: string): string {
  const declaration = /^(\s*)(?:let|const|var)\s+([A-Za-z_$][A-Za-z0-9_$]*)\s*=.*;\s*$/;
  return body
    .split("\n")
    .map((line) => {
      const match = declaration.exec(line);
      if (match) {
        return `${line} __traceVar(${JSON.stringify(match[2])}, ${match[2]});`;
      }
      return line;
    })
    .join("\n");
}

function runTest(
  bundle: WireBundle,
  test: BundleTest,
  store: DocumentStore,
  timeBudgetMs: number,
  outputBudget: number,
): TestRun {
  const traces = new TraceCollector(outputBudget);
  const stubHits: StubTouch[] = [];
  const stubMisses: StubTouch[] = [];
  const started = Date.now();

  const finish = (status: TestResult["status"], message?: string): TestRun => ({
    result: {
      testId: test.id,
      status,
      ...(status === "passed" ? {} : { message: message ?? "" }),
      traces: traces.toList(),
      stubHits,
      stubMisses,
    },
    elapsedMs: Date.now() - started,
  });

  if (timeBudgetMs <= 0) {
    return finish("errored", TIMEOUT_MESSAGE);
  }

  const stubIndex = new Map<string, unknown>();
  for (const stub of bundle.stubs) {
    stubIndex.set(`${stub.calleeName}\u0000${stub.argumentTuple}`, stub.returnValue);
  }
  const implemented = new Set(
    bundle.functions.filter((f) => f.source.trim().length > 0).map((f) => f.name),
  );

  const bindings: Record<string, unknown> = {};
  const context = vm.createContext(bindings);
  let depth = 0;

  const harden = (fn: (...args: unknown[]) => unknown) => {
    Object.setPrototypeOf(fn, null); // cut the host Function constructor chain
    return fn;
  };

  const expose = (name: string, fn: (...args: unknown[]) => unknown): void => {
    bindings[name] = harden(fn);
  };

  const callReal = (name: string, args: unknown[]): unknown => {
    const real = vm.runInContext(`__real_${name}`, context) as (
      ...a: unknown[]
    ) => unknown;
    return real(...args.map(cloneValue));
  };

  const shimFor = (name: string) => {
    return (...args: unknown[]): unknown => {
      const argumentTuple = canonicalize(args);
      const key = `${name}\u0000${argumentTuple}`;
      const expression = expressionFor(name, argumentTuple);
      if (stubIndex.has(key)) {
        stubHits.push({ calleeName: name, argumentTuple });
        const value = cloneValue(stubIndex.get(key));
        traces.record(expression, value);
        return value;
      }
      if (implemented.has(name)) {
        depth += 1;
        try {
          if (depth > MAX_CALL_DEPTH) {
            throw new Error(`call depth limit exceeded in ${name}`);
          }
          const value = cloneValue(callReal(name, args));
          traces.record(expression, value);
          return value;
        } finally {
          depth -= 1;
        }
      }
      stubMisses.push({ calleeName: name, argumentTuple });
      throw new StubMissError(name, argumentTuple);
    };
  };

  // Shims cover every bundle function, every stub-only callee, and every
  // name the sources call, known or not.
  const shimNames = new Set<string>(bundle.functions.map((f) => f.name));
  for (const stub of bundle.stubs) {
    shimNames.add(stub.calleeName);
  }
  const sources = bundle.functions.map((f) => f.source);
  for (const bundleTest of bundle.tests) {
    if (bundleTest.kind === "code") {
      sources.push(bundleTest.source);
    }
  }
  for (const name of candidateCallees(sources)) {
    shimNames.add(name);
  }
  for (const name of shimNames) {
    expose(name, shimFor(name));
  }

  expose("save", (c, i, v) => cloneValue(store.save(String(c), String(i), cloneValue(v))));
  expose("get", (c, i) => cloneValue(store.get(String(c), String(i))));
  expose("update", (c, i, v) => cloneValue(store.update(String(c), String(i), cloneValue(v))));
  expose("remove", (c, i) => store.remove(String(c), String(i)));
  expose("list", (c) => cloneValue(store.list(String(c))));
  expose("__traceVar", (name, value) => {
    traces.record(String(name), cloneValue(value));
    return value;
  });
  expose("assertEquals", (actual, expected) => {
    if (canonicalize(actual) !== canonicalize(expected)) {
      throw new AssertionFailure(
        `expected ${canonicalize(expected)}, got ${canonicalize(actual)}`,
      );
    }
    return true;
  });
  expose("assertTrue", (value) => {
    if (value !== true) {
      throw new AssertionFailure(`expected true, got ${canonicalize(value)}`);
    }
    return true;
  });
  const muted = harden(() => undefined);
  const console_ = { log: muted, warn: muted, error: muted, info: muted, debug: muted };
  Object.setPrototypeOf(console_, null);
  bindings["console"] = console_;

  // Compile the real implementations under mangled names; in-body calls to
  // bare names resolve to the shims above.
  for (const fn of bundle.functions) {
    if (!fn.source.trim()) {
      continue;
    }
    const params = fn.params.join(", ");
    const compile = (body: string): void => {
      vm.runInContext(
        `function __real_${fn.name}(${params}) {\n${body}\n}`,
        context,
        { timeout: Math.max(1, Math.ceil(timeBudgetMs)) },
      );
    };
    try {
      try {
        compile(instrumentBody(fn.source));
      } catch (err) {
        if (err instanceof SyntaxError) {
          compile(fn.source); // instrumentation broke the syntax; run raw
        } else {
          throw err;
        }
      }
    } catch (err) {
      return finish("errored", `syntax error in ${fn.name}: ${messageOf(err)}`);
    }
  }

  try {
    if (test.kind === "io-pair") {
      let result: unknown = null;
      if (implemented.has(bundle.entryFunction)) {
        (context as Record<string, unknown>).__args = test.inputs.map(cloneValue);
        const raw = vm.runInContext(
          `__real_${bundle.entryFunction}(...__args)`,
          context,
          { timeout: Math.max(1, Math.ceil(timeBudgetMs)) },
        );
        result = cloneValue(raw);
      }
      traces.record("return", result);
      if (canonicalize(result) !== canonicalize(test.expectedOutput)) {
        return finish(
          "failed",
          `expected ${canonicalize(test.expectedOutput)}, got ${canonicalize(result)}`,
        );
      }
      return finish("passed");
    }
    vm.runInContext(test.source, context, {
      timeout: Math.max(1, Math.ceil(timeBudgetMs)),
    });
    return finish("passed");
  } catch (err) {
    if (isTimeout(err)) {
      return finish("errored", TIMEOUT_MESSAGE);
    }
    if (err instanceof CanonicalizationError) {
      return finish("errored", `uncanonical value: ${err.message}`);
    }
    const name = (err as Error)?.name;
    if (name === "AssertionFailure") {
      return finish("failed", messageOf(err));
    }
    return finish("errored", describeThrown(err));
  }
}

function isTimeout(err: unknown): boolean {
  return Boolean(
    err &&
      typeof err === "object" &&
      (err as NodeJS.ErrnoException).code === "ERR_SCRIPT_EXECUTION_TIMEOUT",
  );
}

function messageOf(err: unknown): string {
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}

/** Surface authored exceptions the way a developer wrote them. */
function describeThrown(err: unknown): string {
  if (err instanceof Error || (err && typeof err === "object" && "name" in (err as object))) {
    const e = err as Error;
    return e.name && e.name !== "Error" ? `${e.name}: ${e.message}` : e.message;
  }
  try {
    return `thrown value: ${canonicalize(err)}`;
  } catch {
    return "thrown value of unsupported type";
  }
}

export function runBundle(bundle: WireBundle): WireReport {
  const wallTimeMs = (bundle.limits?.wallTimeSeconds ?? 5) * 1000;
  const outputBudget = bundle.limits?.outputBytes ?? 65536;
  const seed: SeedEntry[] = bundle.persistenceSeed ?? [];
  const store = new DocumentStore(seed);

  let remaining = wallTimeMs;
  const perTest: TestResult[] = [];
  for (const test of bundle.tests) {
    store.reset(seed); // never leak persistence between executions
    const run = runTest(bundle, test, store, remaining, outputBudget);
    remaining -= run.elapsedMs;
    perTest.push(run.result);
  }
  return {
    bundleId: bundle.bundleId,
    perTest,
    persistenceFinalState: store.snapshot(),
  };
}

/** Wire-shaped types for bundles and reports. */

export interface BundleFunction {
  name: string;
  params: string[];
  source: string;
}

export interface IoPairTest {
  id: string;
  kind: "io-pair";
  description?: string;
  inputs: unknown[];
  expectedOutput: unknown;
}

export interface CodeTest {
  id: string;
  kind: "code";
  description?: string;
  source: string;
}

export type BundleTest = IoPairTest | CodeTest;

export interface WireStub {
  calleeName: string;
  argumentTuple: string; // canonical text of the argument list
  returnValue: unknown;
}

export interface SeedEntry {
  collection: string;
  id: string;
  value: unknown;
}

export interface Limits {
  wallTimeSeconds?: number;
  outputBytes?: number;
}

export interface WireBundle {
  bundleId: string;
  functions: BundleFunction[];
  entryFunction: string;
  tests: BundleTest[];
  stubs: WireStub[];
  persistenceSeed: SeedEntry[];
  limits: Limits;
}

export interface Trace {
  expression: string;
  values: unknown[];
}

export interface StubTouch {
  calleeName: string;
  argumentTuple: string;
}

export interface TestResult {
  testId: string;
  status: "passed" | "failed" | "errored";
  message?: string;
  traces: Trace[];
  stubHits: StubTouch[];
  stubMisses: StubTouch[];
}

export interface WireReport {
  bundleId: string;
  perTest: TestResult[];
  persistenceFinalState: SeedEntry[];
}

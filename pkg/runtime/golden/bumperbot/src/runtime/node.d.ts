// Generated by arckit 1.0.0 for model BumperBot -- do not edit.
//
// Minimal ambient declarations for the node builtins the entry point uses,
// so generated projects compile without installing @types/node.

declare module "fs" {
  export function readFileSync(path: string, encoding: "utf-8"): string;
  export function writeFileSync(path: string, data: string, encoding: "utf-8"): void;
}

declare const process: {
  argv: string[];
  stdout: { write(s: string): boolean };
  stderr: { write(s: string): boolean };
  exit(code: number): never;
};

/** Spawns the coresample CLI and surfaces its exit-code contract. */

import { execFile } from "node:child_process";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

/** Default command; override per call for non-PATH installs. */
export const DEFAULT_CLI = ["coresample"];

export class CliError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
    public readonly stderr: string,
  ) {
    super(message);
    this.name = "CliError";
  }
}

export async function runCli(args: string[], cli: string[] = DEFAULT_CLI): Promise<string> {
  const [command, ...prefix] = cli;
  try {
    const { stdout } = await execFileAsync(command, [...prefix, ...args], {
      maxBuffer: 256 * 1024 * 1024,
    });
    return stdout;
  } catch (error) {
    const err = error as NodeJS.ErrnoException & { code?: unknown; stderr?: string };
    if (typeof err.code === "number") {
      const stderr = err.stderr ?? "";
      throw new CliError(
        `coresample exited with code ${err.code}: ${stderr.trim()}`,
        err.code,
        stderr,
      );
    }
    throw error;
  }
}

/**
 * Batch augmentation over in-memory arrays.
 *
 * These bindings never reimplement any numerics: a batch is marshaled into
 * the EABF container, handed to the `eegaug` command line, and read back.
 * Outputs are therefore bitwise identical to the library's own, for every
 * transform, seed and epoch.
 */

import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { decodeEabf, encodeEabf, EabfHeader } from "./eabf.js";

export interface ArrayHandle {
  /** contiguous float32 samples, shape [C, T] or [B, C, T] flattened */
  data: Float32Array;
  shape: [number, number] | [number, number, number];
  sfreqHz: number;
  /** 10-20 channel labels; required by montage-aware transforms */
  channelNames?: string[];
}

export interface PolicySpec {
  name: string;
  params?: Record<string, unknown>;
  p_aug?: number;
}

export interface Policy {
  seed: number;
  epoch?: number;
  specs: PolicySpec[];
}

export interface AugmentOptions {
  /** stream index of the first window; lets a 2-D call reproduce its
   * position inside a larger batch */
  windowIndex?: number;
  /** command used to launch the augmentation CLI
   * (default: EEGAUG_PYTHON or "python3", with "-m eegaug") */
  command?: string[];
}

export class AugmentError extends Error {}

function cliCommand(options?: AugmentOptions): string[] {
  if (options?.command) return options.command;
  const python = process.env.EEGAUG_PYTHON ?? "python3";
  return [python, "-m", "eegaug"];
}

function toBatchShape(handle: ArrayHandle): [number, number, number] {
  if (handle.shape.length === 2) {
    return [1, handle.shape[0], handle.shape[1]];
  }
  return handle.shape;
}

function buildHeader(handle: ArrayHandle): EabfHeader {
  const [b, c, t] = toBatchShape(handle);
  if (handle.data.length !== b * c * t) {
    throw new AugmentError(
      `buffer has ${handle.data.length} samples, shape needs ${b * c * t}`,
    );
  }
  const names =
    handle.channelNames ?? Array.from({ length: c }, (_, i) => `E${i}z`);
  if (names.length !== c) {
    throw new AugmentError(
      `${names.length} channel names for ${c} channels`,
    );
  }
  const zeros = new Array<number>(b).fill(0);
  return {
    n_windows: b,
    n_channels: c,
    n_samples: t,
    sfreq_hz: handle.sfreqHz,
    channel_names: names,
    labels: zeros.slice(),
    subjects: zeros.slice(),
    sessions: zeros.slice(),
  };
}

interface PreparedCall {
  workdir: string;
  executable: string;
  argv: string[];
  outputPath: string;
}

function prepare(
  handle: ArrayHandle,
  policy: Policy | string,
  epoch: number,
  options?: AugmentOptions,
): PreparedCall {
  const policyDoc: Policy =
    typeof policy === "string" ? (JSON.parse(policy) as Policy) : policy;
  const header = buildHeader(handle);
  const workdir = mkdtempSync(join(tmpdir(), "eegaug-"));
  const inputPath = join(workdir, "input.eabf");
  const policyPath = join(workdir, "policy.json");
  const outputPath = join(workdir, "output.eabf");
  writeFileSync(inputPath, encodeEabf(header, handle.data));
  writeFileSync(policyPath, JSON.stringify(policyDoc));
  const command = cliCommand(options);
  const argv = [
    ...command.slice(1),
    "augment",
    "-i", inputPath,
    "--policy", policyPath,
    "--seed", String(policyDoc.seed),
    "--epoch", String(epoch),
    "--index-offset", String(options?.windowIndex ?? 0),
    "-o", outputPath,
  ];
  return { workdir, executable: command[0], argv, outputPath };
}

function collect(handle: ArrayHandle, outputPath: string): ArrayHandle {
  const file = decodeEabf(new Uint8Array(readFileSync(outputPath)));
  return {
    data: file.payload.slice(),
    shape: handle.shape,
    sfreqHz: handle.sfreqHz,
    channelNames: handle.channelNames,
  };
}

/**
 * Apply a policy to a batch; window `i` draws from the stream addressed by
 * `(policy.seed, windowIndex + i, epoch)`, exactly as the core library.
 */
export function augmentBatch(
  handle: ArrayHandle,
  policy: Policy | string,
  epoch = 0,
  options?: AugmentOptions,
): ArrayHandle {
  const call = prepare(handle, policy, epoch, options);
  try {
    const result = spawnSync(call.executable, call.argv, { encoding: "utf-8" });
    if (result.error) {
      throw new AugmentError(`failed to launch CLI: ${result.error.message}`);
    }
    if (result.status !== 0) {
      throw new AugmentError(
        result.stderr.trim() || `CLI exited with status ${result.status}`,
      );
    }
    return collect(handle, call.outputPath);
  } finally {
    rmSync(call.workdir, { recursive: true, force: true });
  }
}

/**
 * Non-blocking variant: the host event loop keeps running while the
 * augmentation process works.
 */
export function augmentBatchAsync(
  handle: ArrayHandle,
  policy: Policy | string,
  epoch = 0,
  options?: AugmentOptions,
): Promise<ArrayHandle> {
  const call = prepare(handle, policy, epoch, options);
  return new Promise((resolve, reject) => {
    const child = spawn(call.executable, call.argv);
    let stderr = "";
    child.stderr.on("data", (chunk) => (stderr += String(chunk)));
    child.on("error", (err) => {
      rmSync(call.workdir, { recursive: true, force: true });
      reject(new AugmentError(`failed to launch CLI: ${err.message}`));
    });
    child.on("close", (status) => {
      try {
        if (status !== 0) {
          reject(new AugmentError(
            stderr.trim() || `CLI exited with status ${status}`,
          ));
        } else {
          resolve(collect(handle, call.outputPath));
        }
      } finally {
        rmSync(call.workdir, { recursive: true, force: true });
      }
    });
  });
}

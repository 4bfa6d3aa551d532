/**
 * EABF v1 container codec.
 *
 * Layout: "EABF" magic, u32 LE version, u64 LE header length, UTF-8 JSON
 * header, float32 LE payload ordered window-major, then channel-major,
 * then time.  Decoding exposes the payload as a Float32Array view over the
 * file buffer when its offset is 4-byte aligned (zero-copy), and falls
 * back to one copy otherwise.
 */

const MAGIC = new Uint8Array([0x45, 0x41, 0x42, 0x46]); // "EABF"
const VERSION = 1;
const FIXED_PREFIX = 16;

export interface EabfHeader {
  n_windows: number;
  n_channels: number;
  n_samples: number;
  sfreq_hz: number;
  channel_names: string[];
  channel_positions?: number[][];
  labels: number[];
  subjects: number[];
  sessions: number[];
}

export interface EabfFile {
  header: EabfHeader;
  /** float32 samples, length n_windows * n_channels * n_samples */
  payload: Float32Array;
}

export class EabfFormatError extends Error {}

export function decodeEabf(bytes: Uint8Array): EabfFile {
  if (bytes.length < FIXED_PREFIX) {
    throw new EabfFormatError("file shorter than the fixed EABF prefix");
  }
  for (let i = 0; i < 4; i++) {
    if (bytes[i] !== MAGIC[i]) {
      throw new EabfFormatError("not an EABF file (bad magic)");
    }
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  const version = view.getUint32(4, true);
  if (version !== VERSION) {
    throw new EabfFormatError(`unsupported EABF version ${version}`);
  }
  const headerLen = Number(view.getBigUint64(8, true));
  if (bytes.length < FIXED_PREFIX + headerLen) {
    throw new EabfFormatError("truncated header");
  }
  const headerText = new TextDecoder().decode(
    bytes.subarray(FIXED_PREFIX, FIXED_PREFIX + headerLen),
  );
  let header: EabfHeader;
  try {
    header = JSON.parse(headerText) as EabfHeader;
  } catch (err) {
    throw new EabfFormatError(`header is not valid JSON: ${String(err)}`);
  }
  const count = header.n_windows * header.n_channels * header.n_samples;
  const payloadOffset = bytes.byteOffset + FIXED_PREFIX + headerLen;
  const available = bytes.length - FIXED_PREFIX - headerLen;
  if (available !== count * 4) {
    throw new EabfFormatError(
      `payload is ${available} bytes, header promises ${count * 4}`,
    );
  }
  let payload: Float32Array;
  if (payloadOffset % 4 === 0) {
    payload = new Float32Array(bytes.buffer, payloadOffset, count);
  } else {
    const copy = bytes.slice(FIXED_PREFIX + headerLen);
    payload = new Float32Array(copy.buffer, 0, count);
  }
  return { header, payload };
}

export function encodeEabf(header: EabfHeader, payload: Float32Array): Uint8Array {
  const count = header.n_windows * header.n_channels * header.n_samples;
  if (payload.length !== count) {
    throw new EabfFormatError(
      `payload has ${payload.length} samples, header promises ${count}`,
    );
  }
  const headerBytes = new TextEncoder().encode(JSON.stringify(header));
  const total = FIXED_PREFIX + headerBytes.length + payload.length * 4;
  const out = new Uint8Array(total);
  const view = new DataView(out.buffer);
  out.set(MAGIC, 0);
  view.setUint32(4, VERSION, true);
  view.setBigUint64(8, BigInt(headerBytes.length), true);
  out.set(headerBytes, FIXED_PREFIX);
  const payloadStart = FIXED_PREFIX + headerBytes.length;
  for (let i = 0; i < payload.length; i++) {
    view.setFloat32(payloadStart + i * 4, payload[i], true);
  }
  return out;
}

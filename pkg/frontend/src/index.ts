export { decodeEabf, encodeEabf, EabfFormatError } from "./eabf.js";
export type { EabfFile, EabfHeader } from "./eabf.js";
export { augmentBatch, augmentBatchAsync, AugmentError } from "./augment.js";
export type { ArrayHandle, AugmentOptions, Policy, PolicySpec } from "./augment.js";

export { encode, decode, Float, CodecError } from "./codec.js";
export type { WireValue, WireMap } from "./codec.js";
export { Tensor, TensorError, TENSOR_EXT_TAG } from "./tensor.js";
export type { DtypeName } from "./tensor.js";
export {
  metadataFrame,
  parseMetadata,
  obsFrame,
  actionFrame,
  errorFrame,
  frameType,
  ProtocolViolation,
} from "./protocol.js";
export type { Metadata } from "./protocol.js";
export {
  bridgeServe,
  makePolicy,
  zeroPolicy,
  randomPolicy,
  raisingPolicy,
  BindFailed,
  POLICY_KINDS,
} from "./server.js";
export type { BridgePolicy, BridgeServer, ServeOptions, PolicyKind } from "./server.js";
export {
  bridgeClient,
  BridgeClient,
  ConnectFailed,
  MetadataMismatch,
  ServerInferenceError,
} from "./client.js";
export type { ClientOptions, ServerTiming } from "./client.js";
export { runEpisode, episodeObservation } from "./episode.js";
export type { EpisodeSummary } from "./episode.js";

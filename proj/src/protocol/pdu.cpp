// Copyright 2026 The sfsec Authors
// SPDX-License-Identifier: Apache-2.0

#include "sfsec/protocol/pdu.hpp"

#include <stdexcept>

namespace sfsec::protocol {

Bytes encode_pdu(const Pdu& pdu) {
  if (pdu.body.size() > kMaxAppPayload) throw framing::PayloadTooLarge(pdu.body.size() + kPduHeaderSize);
  Bytes out;
  out.reserve(kPduHeaderSize + pdu.body.size());
  out.push_back(static_cast<std::uint8_t>(pdu.kind));
  out.push_back(pdu.rc);
  out.push_back(pdu.origin);
  out.push_back(pdu.target);
  out.insert(out.end(), pdu.body.begin(), pdu.body.end());
  return out;
}

std::optional<Pdu> decode_pdu(ByteView bytes) {
  if (bytes.size() < kPduHeaderSize) return std::nullopt;
  const auto kind = static_cast<PduKind>(bytes[0]);
  if (kind != PduKind::kInd && kind != PduKind::kData) return std::nullopt;
  Pdu pdu;
  pdu.kind = kind;
  pdu.rc = bytes[1];
  pdu.origin = bytes[2];
  pdu.target = bytes[3];
  pdu.body.assign(bytes.begin() + kPduHeaderSize, bytes.end());
  return pdu;
}

Bytes encode_ind(const IndBody& ind) {
  Bytes out(kIndBodySize);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(ind.epoch_counter >> (56 - 8 * i));
  out[8] = ind.flags;
  return out;
}

std::optional<IndBody> decode_ind(ByteView body) {
  if (body.size() != kIndBodySize) return std::nullopt;
  IndBody ind;
  for (int i = 0; i < 8; ++i) ind.epoch_counter = (ind.epoch_counter << 8) | body[i];
  ind.flags = body[8];
  return ind;
}

}  // namespace sfsec::protocol

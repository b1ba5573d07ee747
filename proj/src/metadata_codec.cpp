#include "semcache/metadata_codec.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "semcache/error.hpp"

namespace semcache {

namespace {

constexpr std::size_t kFixedBytes = 2;
constexpr std::size_t kTlvBytes = 2;

bool is_control(std::uint32_t cp) {
  return cp < 0x20 || (cp >= 0x7F && cp <= 0x9F);
}

// Returns an error message, or empty when `s` is valid UTF-8 with no control
// code points.
std::string check_iri(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    std::uint32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      return fmt::format("invalid UTF-8 lead byte at offset {}", i);
    }
    if (i + len > s.size()) return fmt::format("truncated UTF-8 at offset {}", i);
    for (std::size_t k = 1; k < len; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80)
        return fmt::format("invalid UTF-8 continuation at offset {}", i + k);
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr std::uint32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return fmt::format("invalid code point at offset {}", i);
    if (is_control(cp))
      return fmt::format("control character at offset {}", i);
    i += len;
  }
  return {};
}

bool valid_kind_byte(std::uint8_t b) {
  return b >= static_cast<std::uint8_t>(EntityKind::kPerson) &&
         b <= static_cast<std::uint8_t>(EntityKind::kOther);
}

std::size_t option_wire_size(const HeaderOption& opt) {
  return opt.type == kPad1 ? 1 : kTlvBytes + opt.data.size();
}

void check_payload_size(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kEmptyMetadata, "metadata is empty");
  if (n > kMaxMetadataBytes)
    throw Error(ErrorCode::kMetadataTooLarge,
                fmt::format("metadata is {} bytes, limit is {}", n,
                            kMaxMetadataBytes));
}

void validate_header(const HopByHopHeader& header) {
  for (const auto& opt : header.options) {
    if (opt.type == kPad1 && !opt.data.empty())
      throw Error(ErrorCode::kMalformedHeader, "Pad1 option carries data");
    if (opt.data.size() > kMaxOptionData)
      throw Error(ErrorCode::kMalformedHeader,
                  fmt::format("option data of {} bytes exceeds {}",
                              opt.data.size(), kMaxOptionData));
  }
  if (header.encoded_size() != header.declared_size())
    throw Error(ErrorCode::kMalformedHeader,
                fmt::format("options occupy {} bytes but hdr_ext_len declares {}",
                            header.encoded_size(), header.declared_size()));
  if (header.declared_size() > kMaxHeaderBytes)
    throw Error(ErrorCode::kMalformedHeader, "header exceeds 2048 bytes");
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kPerson: return "Person";
    case EntityKind::kTVSeries: return "TVSeries";
    case EntityKind::kOther: return "Other";
  }
  return "Other";
}

bool parse_entity_kind(std::string_view text, EntityKind& out) {
  if (text == "Person") {
    out = EntityKind::kPerson;
  } else if (text == "TVSeries") {
    out = EntityKind::kTVSeries;
  } else if (text == "Other") {
    out = EntityKind::kOther;
  } else {
    return false;
  }
  return true;
}

std::size_t HopByHopHeader::encoded_size() const {
  std::size_t n = kFixedBytes;
  for (const auto& opt : options) n += option_wire_size(opt);
  return n;
}

std::vector<std::uint8_t> serialize_descriptor(const MetadataDescriptor& d) {
  if (d.entity_iri.empty())
    throw Error(ErrorCode::kEmptyMetadata, "descriptor has an empty IRI");
  if (auto msg = check_iri(d.entity_iri); !msg.empty())
    throw Error(ErrorCode::kInvalidDescriptor, "IRI rejected: " + msg);
  if (!valid_kind_byte(static_cast<std::uint8_t>(d.entity_kind)))
    throw Error(ErrorCode::kInvalidDescriptor, "unknown entity kind");
  const std::size_t n = d.entity_iri.size();
  if (n > 0xFFFF)
    throw Error(ErrorCode::kMetadataTooLarge,
                fmt::format("IRI of {} bytes cannot be carried", n));

  std::vector<std::uint8_t> out;
  out.reserve(kRecordPrefixBytes + n);
  out.push_back(static_cast<std::uint8_t>(d.entity_kind));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n & 0xFF));
  out.insert(out.end(), d.entity_iri.begin(), d.entity_iri.end());
  return out;
}

MetadataDescriptor parse_descriptor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRecordPrefixBytes + 1)
    throw Error(ErrorCode::kUnparseableMetadata,
                fmt::format("record of {} bytes is too short", bytes.size()));
  if (!valid_kind_byte(bytes[0]))
    throw Error(ErrorCode::kUnparseableMetadata,
                fmt::format("unknown kind byte 0x{:02x}", bytes[0]));
  const std::size_t n = (std::size_t{bytes[1]} << 8) | bytes[2];
  if (n != bytes.size() - kRecordPrefixBytes)
    throw Error(ErrorCode::kUnparseableMetadata,
                fmt::format("record declares {} IRI bytes but carries {}", n,
                            bytes.size() - kRecordPrefixBytes));
  MetadataDescriptor d;
  d.entity_kind = static_cast<EntityKind>(bytes[0]);
  d.entity_iri.assign(bytes.begin() + kRecordPrefixBytes, bytes.end());
  if (auto msg = check_iri(d.entity_iri); !msg.empty())
    throw Error(ErrorCode::kUnparseableMetadata, "IRI rejected: " + msg);
  return d;
}

std::size_t wire_size_for_payload(std::size_t payload_bytes) {
  check_payload_size(payload_bytes);
  const std::size_t chunks = (payload_bytes + kMaxOptionData - 1) / kMaxOptionData;
  const std::size_t raw = kFixedBytes + chunks * kTlvBytes + payload_bytes;
  return (raw + 7) / 8 * 8;
}

std::size_t wire_size(const MetadataDescriptor& d) {
  // Validate the descriptor exactly as serialization would.
  if (d.entity_iri.empty())
    throw Error(ErrorCode::kEmptyMetadata, "descriptor has an empty IRI");
  if (auto msg = check_iri(d.entity_iri); !msg.empty())
    throw Error(ErrorCode::kInvalidDescriptor, "IRI rejected: " + msg);
  return wire_size_for_payload(kRecordPrefixBytes + d.entity_iri.size());
}

HopByHopHeader encode_payload(std::span<const std::uint8_t> payload,
                              const CodecOptions& opts) {
  check_payload_size(payload.size());
  HopByHopHeader h;
  h.next_header = opts.next_header;
  for (std::size_t off = 0; off < payload.size(); off += kMaxOptionData) {
    const std::size_t len = std::min(kMaxOptionData, payload.size() - off);
    HeaderOption opt;
    opt.type = opts.option_type;
    opt.data.assign(payload.begin() + off, payload.begin() + off + len);
    h.options.push_back(std::move(opt));
  }
  const std::size_t raw = h.encoded_size();
  const std::size_t pad = (8 - raw % 8) % 8;
  if (pad == 1) {
    h.options.push_back({kPad1, {}});
  } else if (pad > 1) {
    h.options.push_back({kPadN, std::vector<std::uint8_t>(pad - kTlvBytes, 0)});
  }
  h.hdr_ext_len = static_cast<std::uint8_t>(h.encoded_size() / 8 - 1);
  return h;
}

std::vector<std::uint8_t> extract_payload(const HopByHopHeader& header,
                                          const CodecOptions& opts) {
  validate_header(header);
  std::vector<std::uint8_t> payload;
  bool any = false;
  for (const auto& opt : header.options) {
    if (opt.type != opts.option_type) continue;
    any = true;
    payload.insert(payload.end(), opt.data.begin(), opt.data.end());
  }
  if (!any)
    throw Error(ErrorCode::kNoMetadataOptions,
                "header carries no metadata options");
  return payload;
}

HopByHopHeader encode_metadata(const MetadataDescriptor& d,
                               const CodecOptions& opts) {
  return encode_payload(serialize_descriptor(d), opts);
}

MetadataDescriptor decode_metadata(const HopByHopHeader& header,
                                   const CodecOptions& opts) {
  return parse_descriptor(extract_payload(header, opts));
}

std::vector<std::uint8_t> to_bytes(const HopByHopHeader& header) {
  validate_header(header);
  std::vector<std::uint8_t> out;
  out.reserve(header.declared_size());
  out.push_back(header.next_header);
  out.push_back(header.hdr_ext_len);
  for (const auto& opt : header.options) {
    out.push_back(opt.type);
    if (opt.type == kPad1) continue;
    out.push_back(static_cast<std::uint8_t>(opt.data.size()));
    out.insert(out.end(), opt.data.begin(), opt.data.end());
  }
  return out;
}

HopByHopHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8)
    throw Error(ErrorCode::kMalformedHeader,
                fmt::format("{} bytes is shorter than the minimum header",
                            bytes.size()));
  HopByHopHeader h;
  h.next_header = bytes[0];
  h.hdr_ext_len = bytes[1];
  if (h.declared_size() != bytes.size())
    throw Error(ErrorCode::kMalformedHeader,
                fmt::format("hdr_ext_len declares {} bytes, got {}",
                            h.declared_size(), bytes.size()));
  if (h.declared_size() > kMaxHeaderBytes)
    throw Error(ErrorCode::kMalformedHeader, "header exceeds 2048 bytes");

  std::size_t pos = kFixedBytes;
  while (pos < bytes.size()) {
    HeaderOption opt;
    opt.type = bytes[pos];
    if (opt.type == kPad1) {
      h.options.push_back(std::move(opt));
      ++pos;
      continue;
    }
    if (pos + kTlvBytes > bytes.size())
      throw Error(ErrorCode::kMalformedHeader,
                  fmt::format("option at offset {} has no length byte", pos));
    const std::size_t len = bytes[pos + 1];
    if (pos + kTlvBytes + len > bytes.size())
      throw Error(ErrorCode::kMalformedHeader,
                  fmt::format("option at offset {} overruns the header", pos));
    opt.data.assign(bytes.begin() + pos + kTlvBytes,
                    bytes.begin() + pos + kTlvBytes + len);
    h.options.push_back(std::move(opt));
    pos += kTlvBytes + len;
  }
  return h;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<std::uint8_t> out;
  int hi = -1;
  for (char c : hex) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    int v = nibble(c);
    if (v < 0)
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("'{}' is not a hex digit", c));
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw Error(ErrorCode::kInvalidArgument, "odd number of hex digits");
  return out;
}

}  // namespace semcache

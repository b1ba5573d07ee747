#pragma once

// Carriage of request metadata in an IPv6 hop-by-hop options header.
//
// Wire layout (RFC 8200 framing):
//
//   +-------------+-------------+---------------------------------+
//   | next header | hdr ext len | options ...                     |
//   +-------------+-------------+---------------------------------+
//
// Each option is TLV encoded: type (1), data length (1), data (0..255).
// Pad1 is the single byte 0x00; PadN is 0x01, len, len zero bytes.
// The whole header is 8 * (hdr_ext_len + 1) bytes long and at most 2048,
// which leaves room for 2030 bytes of metadata split across 8 options.
//
// Canonical metadata record carried in the concatenated option data:
//
//   kind (1) | iri length, big endian (2) | iri bytes (UTF-8)

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semcache {

enum class EntityKind : std::uint8_t { kPerson = 1, kTVSeries = 2, kOther = 3 };

std::string_view to_string(EntityKind kind);
// Accepts "Person", "TVSeries", "Other" (case-sensitive).
bool parse_entity_kind(std::string_view text, EntityKind& out);

struct MetadataDescriptor {
  std::string entity_iri;
  EntityKind entity_kind = EntityKind::kOther;

  friend bool operator==(const MetadataDescriptor&,
                         const MetadataDescriptor&) = default;
};

inline constexpr std::size_t kMaxOptionData = 255;
inline constexpr std::size_t kMaxHeaderBytes = 2048;
inline constexpr std::size_t kMaxMetadataBytes = 2030;
inline constexpr std::size_t kRecordPrefixBytes = 3;

inline constexpr std::uint8_t kPad1 = 0x00;
inline constexpr std::uint8_t kPadN = 0x01;
// RFC 4727 experimental option; the top two bits (00) tell routers that do
// not understand it to skip over it.
inline constexpr std::uint8_t kDefaultMetadataOptionType = 0x1E;
// TCP, since the metadata rides on an HTTP request.
inline constexpr std::uint8_t kDefaultNextHeader = 6;

struct CodecOptions {
  std::uint8_t option_type = kDefaultMetadataOptionType;
  std::uint8_t next_header = kDefaultNextHeader;
};

struct HeaderOption {
  std::uint8_t type = kPadN;
  std::vector<std::uint8_t> data;

  friend bool operator==(const HeaderOption&, const HeaderOption&) = default;
};

struct HopByHopHeader {
  std::uint8_t next_header = kDefaultNextHeader;
  std::uint8_t hdr_ext_len = 0;
  std::vector<HeaderOption> options;

  // 8 * (hdr_ext_len + 1).
  std::size_t declared_size() const { return 8u * (hdr_ext_len + 1u); }
  // Bytes actually occupied by the fixed fields plus every option.
  std::size_t encoded_size() const;

  friend bool operator==(const HopByHopHeader&,
                         const HopByHopHeader&) = default;
};

// Canonical record for a descriptor. Throws kEmptyMetadata for an empty IRI,
// kInvalidDescriptor for control characters or invalid UTF-8.
std::vector<std::uint8_t> serialize_descriptor(const MetadataDescriptor& d);
// Inverse of serialize_descriptor; throws kUnparseableMetadata.
MetadataDescriptor parse_descriptor(std::span<const std::uint8_t> bytes);

// Frames an arbitrary payload into metadata options (greedy 255-byte
// chunks) followed by Pad1/PadN up to the next multiple of 8.
HopByHopHeader encode_payload(std::span<const std::uint8_t> payload,
                              const CodecOptions& opts = {});
// Concatenated data of the metadata-bearing options, in order.
std::vector<std::uint8_t> extract_payload(const HopByHopHeader& header,
                                          const CodecOptions& opts = {});

HopByHopHeader encode_metadata(const MetadataDescriptor& d,
                               const CodecOptions& opts = {});
MetadataDescriptor decode_metadata(const HopByHopHeader& header,
                                   const CodecOptions& opts = {});

// Wire size of a header carrying `payload_bytes` of metadata.
std::size_t wire_size_for_payload(std::size_t payload_bytes);
// Exact size of encode_metadata(d) without building it.
std::size_t wire_size(const MetadataDescriptor& d);

std::vector<std::uint8_t> to_bytes(const HopByHopHeader& header);
// Parses wire bytes; throws kMalformedHeader when the TLV chain does not
// exactly fill the declared length.
HopByHopHeader parse_header(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);
// Whitespace is ignored; throws kInvalidArgument on odd length or bad digits.
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace semcache

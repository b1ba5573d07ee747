#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semcache/metadata_codec.hpp"

namespace semcache {

enum class Predicate : std::uint8_t { kSpouse, kStarring, kTypeOf };

std::string_view to_string(Predicate p);

struct Triple {
  std::string subject;
  Predicate predicate = Predicate::kSpouse;
  // An entity IRI, or a kind literal for kTypeOf.
  std::string object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Directed triple store over people and TV series, immutable once loaded.
//
// Text format, one statement per line, '#' starts a comment:
//
//   "<iri>" spouse "<iri>"
//   "<iri>" starring "<iri>"
//   "<iri>" type Person|TVSeries
//   "<iri>" size <bytes>
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  // Throws Error with kParseError, kMissingSize or kMissingType; the error
  // carries the offending (or first referencing) line number.
  static KnowledgeBase load(std::istream& in);
  static KnowledgeBase load_file(const std::string& path);

  bool contains(std::string_view iri) const;
  std::size_t entity_count() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }

  // Relation and type triples, deduplicated and sorted.
  const std::set<Triple>& triples() const { return triples_; }
  std::size_t count(Predicate p) const;

  // Entity IRIs in lexicographic order.
  const std::vector<std::string>& entities() const { return entity_order_; }

  EntityKind kind_of(std::string_view iri) const;
  std::uint64_t content_size_of(std::string_view iri) const;
  MetadataDescriptor descriptor_of(std::string_view iri) const;

  // Objects of `p` for `subject`, sorted lexicographically.
  const std::vector<std::string>& objects(std::string_view subject,
                                          Predicate p) const;

 private:
  struct Entity {
    EntityKind kind = EntityKind::kOther;
    std::uint64_t size = 0;
    std::vector<std::string> spouses;
    std::vector<std::string> stars;
  };

  const Entity& entity(std::string_view iri) const;

  std::set<Triple> triples_;
  std::map<std::string, Entity, std::less<>> entities_;
  std::vector<std::string> entity_order_;
};

// One-hop inference: spouses of a person, stars of a TV series.
// Throws kUnknownEntity when the IRI is not in the knowledge base.
std::vector<MetadataDescriptor> infer_next(const KnowledgeBase& kb,
                                           const MetadataDescriptor& current);

// How the simulator asks for prefetch candidates.
class InferencePolicy {
 public:
  virtual ~InferencePolicy() = default;
  virtual std::vector<MetadataDescriptor> infer(
      const MetadataDescriptor& current) const = 0;
  virtual std::string_view name() const = 0;
};

// Never predicts anything; Semantic mode then behaves like Traditional.
class NullInference final : public InferencePolicy {
 public:
  std::vector<MetadataDescriptor> infer(
      const MetadataDescriptor&) const override {
    return {};
  }
  std::string_view name() const override { return "null"; }
};

// Spouse/starring rule over a knowledge base, optionally truncated to the
// first `max_prefetch` candidates (0 means unlimited).
class RelationInference final : public InferencePolicy {
 public:
  explicit RelationInference(const KnowledgeBase& kb,
                             std::size_t max_prefetch = 0)
      : kb_(&kb), max_prefetch_(max_prefetch) {}

  std::vector<MetadataDescriptor> infer(
      const MetadataDescriptor& current) const override;
  std::string_view name() const override { return "relation"; }

 private:
  const KnowledgeBase* kb_;
  std::size_t max_prefetch_;
};

}  // namespace semcache

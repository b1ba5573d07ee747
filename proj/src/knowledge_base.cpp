#include "semcache/knowledge_base.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>

#include "semcache/error.hpp"

namespace semcache {

namespace {

struct Statement {
  std::string subject;
  std::string verb;
  std::string object;
  bool object_quoted = false;
};

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParseError, fmt::format("line {}: {}", line, msg),
              line);
}

void skip_space(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r'))
    ++pos;
}

// Returns false for blank/comment-only lines.
bool tokenize(std::string_view line, std::size_t lineno, Statement& st) {
  std::size_t pos = 0;
  skip_space(line, pos);
  if (pos == line.size() || line[pos] == '#') return false;

  auto quoted = [&](std::string& out) {
    if (line[pos] != '"') parse_fail(lineno, "expected a quoted IRI");
    const auto close = line.find('"', pos + 1);
    if (close == std::string_view::npos) parse_fail(lineno, "unterminated IRI");
    out.assign(line.substr(pos + 1, close - pos - 1));
    if (out.empty()) parse_fail(lineno, "empty IRI");
    pos = close + 1;
  };
  auto bare = [&](std::string& out) {
    const auto start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r' && line[pos] != '#')
      ++pos;
    out.assign(line.substr(start, pos - start));
  };

  quoted(st.subject);
  skip_space(line, pos);
  bare(st.verb);
  if (st.verb.empty()) parse_fail(lineno, "missing predicate");
  skip_space(line, pos);
  if (pos == line.size() || line[pos] == '#') parse_fail(lineno, "missing object");
  st.object_quoted = line[pos] == '"';
  if (st.object_quoted) {
    quoted(st.object);
  } else {
    bare(st.object);
  }
  skip_space(line, pos);
  if (pos < line.size() && line[pos] != '#')
    parse_fail(lineno, "unexpected trailing text");
  return true;
}

}  // namespace

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::kSpouse: return "spouse";
    case Predicate::kStarring: return "starring";
    case Predicate::kTypeOf: return "type";
  }
  return "?";
}

KnowledgeBase KnowledgeBase::load(std::istream& in) {
  struct Pending {
    std::size_t first_line = 0;
    std::optional<EntityKind> kind;
    std::optional<std::uint64_t> size;
  };
  std::map<std::string, Pending, std::less<>> seen;
  auto touch = [&](const std::string& iri, std::size_t lineno) -> Pending& {
    auto& p = seen[iri];
    if (p.first_line == 0) p.first_line = lineno;
    return p;
  };

  KnowledgeBase kb;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    Statement st;
    if (!tokenize(raw, lineno, st)) continue;

    if (st.verb == "spouse" || st.verb == "starring") {
      if (!st.object_quoted)
        parse_fail(lineno, fmt::format("object of '{}' must be a quoted IRI",
                                       st.verb));
      touch(st.subject, lineno);
      touch(st.object, lineno);
      kb.triples_.insert({st.subject,
                          st.verb == "spouse" ? Predicate::kSpouse
                                              : Predicate::kStarring,
                          st.object});
    } else if (st.verb == "type") {
      EntityKind kind{};
      if (st.object_quoted || !parse_entity_kind(st.object, kind) ||
          kind == EntityKind::kOther)
        parse_fail(lineno, fmt::format("type must be Person or TVSeries, got '{}'",
                                       st.object));
      auto& p = touch(st.subject, lineno);
      if (p.kind && *p.kind != kind)
        parse_fail(lineno, fmt::format("conflicting type for \"{}\"", st.subject));
      p.kind = kind;
      kb.triples_.insert({st.subject, Predicate::kTypeOf, st.object});
    } else if (st.verb == "size") {
      std::uint64_t bytes = 0;
      const char* first = st.object.data();
      const char* last = first + st.object.size();
      auto [ptr, ec] = std::from_chars(first, last, bytes);
      if (st.object_quoted || ec != std::errc{} || ptr != last || bytes == 0)
        parse_fail(lineno, fmt::format("size must be a positive integer, got '{}'",
                                       st.object));
      auto& p = touch(st.subject, lineno);
      if (p.size && *p.size != bytes)
        parse_fail(lineno, fmt::format("conflicting size for \"{}\"", st.subject));
      p.size = bytes;
    } else {
      parse_fail(lineno, fmt::format("unknown predicate '{}'", st.verb));
    }
  }

  // Report the earliest offending entity so the error is independent of map
  // iteration order.
  const std::pair<const std::string, Pending>* missing_size = nullptr;
  const std::pair<const std::string, Pending>* missing_type = nullptr;
  for (const auto& entry : seen) {
    const auto& p = entry.second;
    if (!p.size && (!missing_size || p.first_line < missing_size->second.first_line))
      missing_size = &entry;
    if (!p.kind && (!missing_type || p.first_line < missing_type->second.first_line))
      missing_type = &entry;
  }
  if (missing_size) {
    const auto line = missing_size->second.first_line;
    throw Error(ErrorCode::kMissingSize,
                fmt::format("line {}: \"{}\" has no size declaration", line,
                            missing_size->first),
                line);
  }
  if (missing_type) {
    const auto line = missing_type->second.first_line;
    throw Error(ErrorCode::kMissingType,
                fmt::format("line {}: \"{}\" has no type declaration", line,
                            missing_type->first),
                line);
  }

  for (const auto& [iri, p] : seen) {
    Entity e;
    e.kind = *p.kind;
    e.size = *p.size;
    kb.entities_.emplace(iri, std::move(e));
    kb.entity_order_.push_back(iri);
  }
  // triples_ is ordered by (subject, predicate, object), so objects arrive
  // already sorted.
  for (const auto& t : kb.triples_) {
    auto& e = kb.entities_.find(t.subject)->second;
    if (t.predicate == Predicate::kSpouse) e.spouses.push_back(t.object);
    if (t.predicate == Predicate::kStarring) e.stars.push_back(t.object);
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kConfigError,
                fmt::format("cannot open knowledge base '{}'", path));
  return load(in);
}

bool KnowledgeBase::contains(std::string_view iri) const {
  return entities_.find(iri) != entities_.end();
}

std::size_t KnowledgeBase::count(Predicate p) const {
  return static_cast<std::size_t>(std::count_if(
      triples_.begin(), triples_.end(),
      [p](const Triple& t) { return t.predicate == p; }));
}

const KnowledgeBase::Entity& KnowledgeBase::entity(std::string_view iri) const {
  auto it = entities_.find(iri);
  if (it == entities_.end())
    throw Error(ErrorCode::kUnknownEntity,
                fmt::format("\"{}\" is not in the knowledge base", iri));
  return it->second;
}

EntityKind KnowledgeBase::kind_of(std::string_view iri) const {
  return entity(iri).kind;
}

std::uint64_t KnowledgeBase::content_size_of(std::string_view iri) const {
  return entity(iri).size;
}

MetadataDescriptor KnowledgeBase::descriptor_of(std::string_view iri) const {
  return {std::string(iri), kind_of(iri)};
}

const std::vector<std::string>& KnowledgeBase::objects(std::string_view subject,
                                                       Predicate p) const {
  static const std::vector<std::string> kNone;
  const auto& e = entity(subject);
  switch (p) {
    case Predicate::kSpouse: return e.spouses;
    case Predicate::kStarring: return e.stars;
    case Predicate::kTypeOf: break;
  }
  return kNone;
}

std::vector<MetadataDescriptor> infer_next(const KnowledgeBase& kb,
                                           const MetadataDescriptor& current) {
  const std::vector<std::string>* related = nullptr;
  switch (current.entity_kind) {
    case EntityKind::kPerson:
      related = &kb.objects(current.entity_iri, Predicate::kSpouse);
      break;
    case EntityKind::kTVSeries:
      related = &kb.objects(current.entity_iri, Predicate::kStarring);
      break;
    case EntityKind::kOther:
      kb.kind_of(current.entity_iri);  // still reject unknown IRIs
      return {};
  }
  std::vector<MetadataDescriptor> out;
  out.reserve(related->size());
  for (const auto& iri : *related) out.push_back(kb.descriptor_of(iri));
  return out;
}

std::vector<MetadataDescriptor> RelationInference::infer(
    const MetadataDescriptor& current) const {
  auto out = infer_next(*kb_, current);
  if (max_prefetch_ > 0 && out.size() > max_prefetch_) out.resize(max_prefetch_);
  return out;
}

}  // namespace semcache

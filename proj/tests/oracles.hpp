#pragma once

// Test-only reference implementations. They deliberately share no code with
// the library so they can be used as independent oracles.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Hop-by-hop header bytes built one byte at a time: a new TLV is opened
// whenever the current one holds 255 bytes, then zero bytes are appended via
// Pad1/PadN until the length is a multiple of 8.
inline std::vector<std::uint8_t> header_layout(const std::vector<std::uint8_t>& payload,
                                               std::uint8_t next_header = 6,
                                               std::uint8_t option_type = 0x1E) {
  std::vector<std::uint8_t> out = {next_header, 0};
  std::size_t len_pos = 0;
  std::size_t in_option = 255;
  for (std::uint8_t b : payload) {
    if (in_option == 255) {
      out.push_back(option_type);
      out.push_back(0);
      len_pos = out.size() - 1;
      in_option = 0;
    }
    out.push_back(b);
    ++in_option;
    out[len_pos] = static_cast<std::uint8_t>(in_option);
  }
  std::size_t pad = 0;
  while ((out.size() + pad) % 8 != 0) ++pad;
  if (pad == 1) {
    out.push_back(0x00);
  } else if (pad >= 2) {
    out.push_back(0x01);
    out.push_back(static_cast<std::uint8_t>(pad - 2));
    for (std::size_t i = 0; i < pad - 2; ++i) out.push_back(0);
  }
  out[1] = static_cast<std::uint8_t>(out.size() / 8 - 1);
  return out;
}

// Linear-scan byte-capacity LRU cache. Victim: minimal
// (last_access, inserted_at, key) among residents.
class ReferenceLru {
 public:
  struct Item {
    std::string key;
    std::uint64_t size;
    double inserted_at;
    double last_access;
  };

  explicit ReferenceLru(std::uint64_t capacity) : capacity_(capacity) {}

  bool lookup(const std::string& key, double now) {
    for (auto& it : items_)
      if (it.key == key) {
        it.last_access = now;
        return true;
      }
    return false;
  }

  // Returns false when the object can never fit.
  bool insert(const std::string& key, std::uint64_t size, double now) {
    if (size > capacity_) return false;
    for (auto& it : items_)
      if (it.key == key && it.size == size) {
        it.last_access = now;
        return true;
      }
    erase(key);
    while (used() + size > capacity_) erase(victim());
    items_.push_back({key, size, now, now});
    return true;
  }

  std::string victim() const {
    const Item* best = nullptr;
    for (const auto& it : items_) {
      if (!best || it.last_access < best->last_access ||
          (it.last_access == best->last_access &&
           (it.inserted_at < best->inserted_at ||
            (it.inserted_at == best->inserted_at && it.key < best->key))))
        best = &it;
    }
    return best ? best->key : std::string();
  }

  std::uint64_t used() const {
    std::uint64_t u = 0;
    for (const auto& it : items_) u += it.size;
    return u;
  }

  bool contains(const std::string& key) const {
    for (const auto& it : items_)
      if (it.key == key) return true;
    return false;
  }

  std::size_t size() const { return items_.size(); }

 private:
  void erase(const std::string& key) {
    for (auto i = items_.begin(); i != items_.end(); ++i)
      if (i->key == key) {
        items_.erase(i);
        return;
      }
  }

  std::uint64_t capacity_;
  std::vector<Item> items_;
};

}  // namespace oracle

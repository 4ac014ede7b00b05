#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "infomap/detail/text.hpp"
#include "infomap/error.hpp"
#include "infomap/hierarchy.hpp"
#include "infomap/native_format.hpp"

namespace infomap {

/// Providers a hierarchy config may reference by name.
using ProviderRegistry = std::map<std::string, std::shared_ptr<const Provider>, std::less<>>;

inline Combinator parse_combinator(std::string_view text) {
  if (text == "product") return Combinator::Product;
  if (text == "min") return Combinator::Min;
  if (text == "max") return Combinator::Max;
  if (text == "mean") return Combinator::Mean;
  if (text == "sum") return Combinator::SumClamped;
  if (text == "override") return Combinator::Override;
  throw Error(ErrorCode::InvalidArgument, "unknown combinator '" + std::string(text) + "'");
}

// Hierarchy config, one block per node:
//
//   node <name>
//   source static <path> | objects <neutral> | provider <registered-name>
//   combine product|min|max|mean|sum|override      (optional, default product)
//   children <name> <name> ...                     (optional)
//
// Static paths are relative to `base_dir`. All names are resolved and the
// result is checked to be a forest before anything is returned.
inline Hierarchy parse_hierarchy_config(std::string_view text, const std::filesystem::path& base_dir,
                                        const ProviderRegistry& providers = {}) {
  struct Block {
    std::string name;
    std::size_t offset = 0;
    std::optional<MapSource> source;
    Combinator combinator = Combinator::Product;
    std::vector<std::pair<std::string, std::size_t>> children;
  };
  auto fail = [](std::size_t offset, const std::string& why) -> void {
    throw Error(ErrorCode::FormatError, why, offset);
  };

  std::vector<Block> blocks;
  for (const auto& line : detail::content_lines(text)) {
    const auto tok = detail::split_ws(line.text);
    const auto key = tok.front();
    if (key == "node") {
      if (tok.size() != 2) fail(line.offset, "expected 'node <name>'");
      blocks.push_back(Block{std::string(tok[1]), line.offset, std::nullopt, Combinator::Product, {}});
      continue;
    }
    if (blocks.empty()) fail(line.offset, "'" + std::string(key) + "' before any 'node'");
    Block& b = blocks.back();
    if (key == "source") {
      if (tok.size() < 2) fail(line.offset, "expected a source kind");
      if (b.source) fail(line.offset, "node '" + b.name + "' has two sources");
      if (tok[1] == "static" && tok.size() == 3) {
        std::filesystem::path path(tok[2]);
        if (path.is_relative()) path = base_dir / path;
        b.source = MapSource{std::make_shared<const InformationMap>(load_native_file(path))};
      } else if (tok[1] == "objects" && tok.size() == 3) {
        const auto neutral = detail::parse_double(tok[2]);
        if (!neutral) fail(line.offset, "bad neutral value");
        b.source = MapSource{std::make_shared<DynamicObjectMap>(*neutral)};
      } else if (tok[1] == "provider" && tok.size() == 3) {
        const auto it = providers.find(tok[2]);
        if (it == providers.end())
          throw Error(ErrorCode::UnknownName, "no registered provider '" + std::string(tok[2]) + "'");
        b.source = MapSource{it->second};
      } else {
        fail(line.offset, "expected 'source static <path>|objects <neutral>|provider <name>'");
      }
    } else if (key == "combine") {
      if (tok.size() != 2) fail(line.offset, "expected 'combine <kind>'");
      try {
        b.combinator = parse_combinator(tok[1]);
      } catch (const Error& e) {
        fail(line.offset, e.what());
      }
    } else if (key == "children") {
      for (std::size_t i = 1; i < tok.size(); ++i)
        b.children.emplace_back(std::string(tok[i]), line.offset + static_cast<std::size_t>(tok[i].data() - line.text.data()));
    } else {
      fail(line.offset, "unknown key '" + std::string(key) + "'");
    }
  }

  Hierarchy h;
  for (auto& b : blocks) {
    if (!b.source) fail(b.offset, "node '" + b.name + "' has no source");
    h.add(b.name, std::move(*b.source), b.combinator);
  }
  for (const auto& b : blocks) {
    for (const auto& [child, offset] : b.children) {
      if (!h.contains(child))
        throw Error(ErrorCode::UnknownName, "node '" + b.name + "' lists unknown child '" + child + "'");
      h.link(b.name, child);
    }
  }
  return h;
}

inline Hierarchy load_hierarchy_config(const std::filesystem::path& path, const ProviderRegistry& providers = {}) {
  return parse_hierarchy_config(detail::read_file(path), path.parent_path(), providers);
}

}  // namespace infomap

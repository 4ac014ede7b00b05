#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "infomap/error.hpp"
#include "infomap/grid.hpp"
#include "infomap/information_map.hpp"

namespace infomap {

/// How a node folds its own value with the values of its children.
enum class Combinator { Product, Min, Max, Mean, SumClamped, Override };

inline std::string to_string(Combinator c) {
  switch (c) {
    case Combinator::Product: return "product";
    case Combinator::Min: return "min";
    case Combinator::Max: return "max";
    case Combinator::Mean: return "mean";
    case Combinator::SumClamped: return "sum";
    case Combinator::Override: return "override";
  }
  return "product";
}

/// Disks around currently known objects, e.g. existing tracks that should
/// suppress birth. Where disks overlap the smallest value wins; outside all
/// disks the map answers `neutral`.
///
/// One writer and any number of readers may use the map concurrently; a
/// lookup sees the state before or after a mutation, never in between.
class DynamicObjectMap {
 public:
  struct Object {
    WorldPosition center;
    double radius = 1.0;
    double value = 0.0;
  };

  explicit DynamicObjectMap(double neutral, std::optional<ValueRange> range = std::nullopt)
      : neutral_(neutral),
        range_(range.value_or(ValueRange{std::min(0.0, neutral), std::max(1.0, neutral)})) {
    if (!(range_.min < range_.max)) throw Error(ErrorCode::InvalidRange, "object map range needs min < max");
    if (!range_.contains(neutral)) throw Error(ErrorCode::InvalidRange, "neutral value outside object map range");
  }

  void insert(const std::string& id, WorldPosition center, double radius, double value) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw Error(ErrorCode::InvalidArgument, "object radius must be positive");
    if (!range_.contains(value)) throw Error(ErrorCode::InvalidRange, "object value outside object map range");
    std::unique_lock lock(mutex_);
    if (objects_.contains(id)) throw Error(ErrorCode::DuplicateId, "object '" + id + "' already present");
    objects_.emplace(id, Object{center, radius, value});
  }

  void remove(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (objects_.erase(id) == 0) throw Error(ErrorCode::UnknownId, "no object '" + id + "'");
  }

  void clear() {
    std::unique_lock lock(mutex_);
    objects_.clear();
  }

  double value_at(WorldPosition p) const {
    std::shared_lock lock(mutex_);
    double result = neutral_;
    bool hit = false;
    for (const auto& [id, obj] : objects_) {
      if (std::hypot(p.x - obj.center.x, p.y - obj.center.y) <= obj.radius) {
        result = hit ? std::min(result, obj.value) : obj.value;
        hit = true;
      }
    }
    return result;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return objects_.size();
  }

  double neutral() const { return neutral_; }
  ValueRange range() const { return range_; }

 private:
  double neutral_;
  ValueRange range_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Object> objects_;
};

/// Adapter to a value source living outside the library (another toolbox,
/// a dynamic grid, a database). Answers are checked against range().
class Provider {
 public:
  virtual ~Provider() = default;
  /// Value at `p`, or kUnknown.
  virtual double request(WorldPosition p) const = 0;
  virtual ValueRange range() const = 0;
};

class FunctionProvider final : public Provider {
 public:
  FunctionProvider(std::function<double(WorldPosition)> fn, ValueRange range) : fn_(std::move(fn)), range_(range) {}
  double request(WorldPosition p) const override { return fn_(p); }
  ValueRange range() const override { return range_; }

 private:
  std::function<double(WorldPosition)> fn_;
  ValueRange range_;
};

using MapSource = std::variant<std::shared_ptr<const InformationMap>, std::shared_ptr<DynamicObjectMap>,
                               std::shared_ptr<const Provider>>;

struct MapNode {
  std::string name;
  MapSource source;
  Combinator combinator = Combinator::Product;
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
};

struct BakeOptions {
  OobPolicy oob = OobPolicy::DefaultValue;
  /// Defaults to the lower end of the baked range.
  std::optional<double> oob_default;
  /// Defaults to the node's range widened to cover every baked value.
  std::optional<ValueRange> range;
};

/// A forest of named map nodes. Requests to a node fold the node's own
/// value with the requests of its children. Structure changes (add, link)
/// must not race with requests; object maps inside may change at any time.
class Hierarchy {
 public:
  using NodeId = std::size_t;

  NodeId add(const std::string& name, MapSource source, Combinator combinator = Combinator::Product) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "node name must not be empty");
    if (index_.contains(name)) throw Error(ErrorCode::DuplicateName, "node '" + name + "' already exists");
    std::visit([&](const auto& ptr) {
      if (!ptr) throw Error(ErrorCode::InvalidArgument, "node '" + name + "' has a null source");
    }, source);
    nodes_.push_back(MapNode{name, std::move(source), combinator, {}, std::nullopt});
    index_.emplace(name, nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  NodeId add(const std::string& name, InformationMap map, Combinator combinator = Combinator::Product) {
    return add(name, MapSource{std::make_shared<const InformationMap>(std::move(map))}, combinator);
  }

  /// Appends `child` to the ordered children of `parent`.
  void link(std::string_view parent, std::string_view child) {
    const NodeId p = id(parent);
    const NodeId c = id(child);
    for (std::optional<NodeId> walk = p; walk; walk = nodes_[*walk].parent) {
      if (*walk == c)
        throw Error(ErrorCode::CycleDetected,
                    "linking '" + std::string(child) + "' under '" + std::string(parent) + "' creates a cycle");
    }
    if (nodes_[c].parent)
      throw Error(ErrorCode::DuplicateName, "node '" + std::string(child) + "' is already linked under '" +
                                                nodes_[*nodes_[c].parent].name + "'");
    nodes_[p].children.push_back(c);
    nodes_[c].parent = p;
  }

  bool contains(std::string_view name) const { return index_.contains(std::string(name)); }

  NodeId id(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) throw Error(ErrorCode::UnknownName, "no node named '" + std::string(name) + "'");
    return it->second;
  }

  const MapNode& node(NodeId n) const { return nodes_.at(n); }
  const MapNode& node(std::string_view name) const { return nodes_[id(name)]; }
  std::size_t size() const { return nodes_.size(); }

  /// Object map behind `name`, or null if the node has another source.
  std::shared_ptr<DynamicObjectMap> object_map(std::string_view name) const {
    const auto* ptr = std::get_if<std::shared_ptr<DynamicObjectMap>>(&node(name).source);
    return ptr ? *ptr : nullptr;
  }

  /// Static map behind `name`, or null if the node has another source.
  std::shared_ptr<const InformationMap> static_map(std::string_view name) const {
    const auto* ptr = std::get_if<std::shared_ptr<const InformationMap>>(&node(name).source);
    return ptr ? *ptr : nullptr;
  }

  ValueRange range(NodeId n) const {
    return std::visit([](const auto& src) { return src->range(); }, nodes_.at(n).source);
  }

  /// The node's own value at `p`, without its children.
  double own_value(NodeId n, WorldPosition p) const {
    const MapNode& nd = nodes_.at(n);
    if (const auto* m = std::get_if<std::shared_ptr<const InformationMap>>(&nd.source)) return (*m)->value_at(p);
    if (const auto* o = std::get_if<std::shared_ptr<DynamicObjectMap>>(&nd.source)) return (*o)->value_at(p);
    const auto& provider = std::get<std::shared_ptr<const Provider>>(nd.source);
    const double v = provider->request(p);
    if (!is_unknown(v) && !provider->range().contains(v))
      throw Error(ErrorCode::ProviderRange, "provider behind '" + nd.name + "' answered " + std::to_string(v) +
                                                " outside its declared range");
    return v;
  }

  /// Combined value of `n` and its subtree at `p`; kUnknown if every
  /// operand is unknown.
  double request(NodeId n, WorldPosition p) const {
    const MapNode& nd = nodes_.at(n);
    const double own = own_value(n, p);
    if (nd.children.empty()) return own;

    if (nd.combinator == Combinator::Override) {
      for (NodeId c : nd.children) {
        const double v = request(c, p);
        if (!is_unknown(v)) return v;
      }
      return own;
    }

    std::vector<double> operands;
    operands.reserve(nd.children.size() + 1);
    if (!is_unknown(own)) operands.push_back(own);
    for (NodeId c : nd.children) {
      const double v = request(c, p);
      if (!is_unknown(v)) operands.push_back(v);
    }
    return fold(nd.combinator, operands, range(n));
  }

  double request(std::string_view name, WorldPosition p) const { return request(id(name), p); }

  /// Samples request(n, .) at every cell center of `spec` into a new static map.
  InformationMap bake(NodeId n, const GridSpec& spec, const BakeOptions& options = {}) const {
    spec.validate();
    std::vector<double> values(spec.cell_count());
    ValueRange observed = range(n);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        const double v = request(n, cell_center(spec, {r, c}));
        values[spec.linear({r, c})] = v;
        if (!is_unknown(v)) {
          observed.min = std::min(observed.min, v);
          observed.max = std::max(observed.max, v);
        }
      }
    }
    const ValueRange out_range = options.range.value_or(observed);
    return InformationMap(spec, std::move(values), out_range.min, out_range.max, options.oob,
                          options.oob_default.value_or(out_range.min));
  }

  InformationMap bake(std::string_view name, const GridSpec& spec, const BakeOptions& options = {}) const {
    return bake(id(name), spec, options);
  }

  /// Folds known operands. The operands are sorted first so the result
  /// does not depend on child order for the commutative combinators.
  static double fold(Combinator combinator, std::vector<double>& operands, ValueRange range) {
    if (operands.empty()) return kUnknown;
    std::sort(operands.begin(), operands.end());
    switch (combinator) {
      case Combinator::Product: {
        double acc = 1.0;
        for (double v : operands) acc *= v;
        return acc;
      }
      case Combinator::Min:
        return operands.front();
      case Combinator::Max:
        return operands.back();
      case Combinator::Mean: {
        double acc = 0.0;
        for (double v : operands) acc += v;
        return acc / static_cast<double>(operands.size());
      }
      case Combinator::SumClamped: {
        double acc = 0.0;
        for (double v : operands) acc += v;
        return std::clamp(acc, range.min, range.max);
      }
      case Combinator::Override:
        return operands.front();
    }
    return kUnknown;
  }

 private:
  std::vector<MapNode> nodes_;
  std::unordered_map<std::string, NodeId> index_;
};

}  // namespace infomap

#pragma once

// Euclidean spaces and smooth maps as a cartesian base, plus the
// reverse-mode engine: DAGs of differentiable primitives, forward
// evaluation that records a tape, and a backward sweep of vector-Jacobian
// products.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace paraoptic {

using Vector = Eigen::VectorXd;

Vector concat(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

// ℝ^dim.
struct Space {
  std::size_t dim = 0;
  friend bool operator==(const Space&, const Space&) = default;
};

// A smooth map ℝ^in → ℝ^out given as a procedure.
class SmoothFn {
 public:
  using Fn = std::function<Vector(const Vector&)>;

  SmoothFn(Space in, Space out, Fn fn) : in_(in), out_(out), fn_(std::move(fn)) {}

  Space in() const noexcept { return in_; }
  Space out() const noexcept { return out_; }
  // Throws DimensionError on a wrongly sized argument or result.
  Vector operator()(const Vector& x) const;

 private:
  Space in_;
  Space out_;
  Fn fn_;
};

// The smooth base. Products are concatenations, elements are vectors.
// Morphisms are procedures, so equality is undecidable.
struct SmoothBase {
  using Object = Space;
  using Morphism = SmoothFn;
  using Element = Vector;

  static constexpr bool kDecidableEquality = false;
  static constexpr const char* kName = "smooth";

  static Space unit() { return {0}; }
  static Vector unique_point() { return Vector(0); }
  static Space product(Space a, Space b) { return {a.dim + b.dim}; }
  static bool same(Space a, Space b) { return a == b; }
  static std::string describe(Space a) { return "ℝ^" + std::to_string(a.dim); }

  static Space dom(const SmoothFn& f) { return f.in(); }
  static Space cod(const SmoothFn& f) { return f.out(); }
  static SmoothFn identity(Space a);
  static SmoothFn compose(const SmoothFn& f, const SmoothFn& g);
  static SmoothFn tensor(const SmoothFn& f, const SmoothFn& g);
  static SmoothFn fanout(const SmoothFn& f, const SmoothFn& g);
  static SmoothFn proj1(Space a, Space b);
  static SmoothFn proj2(Space a, Space b);
  static SmoothFn terminal(Space a);
  static SmoothFn point(Space a, const Vector& x);
  static bool contains(Space a, const Vector& x) {
    return static_cast<std::size_t>(x.size()) == a.dim && all_finite(x);
  }
  static Vector apply(const SmoothFn& f, const Vector& x) { return f(x); }
  static Vector pair(Space, Space, const Vector& x, const Vector& y) { return concat(x, y); }
  static Vector first(Space a, Space, const Vector& xy) { return xy.head(a.dim); }
  static Vector second(Space a, Space b, const Vector& xy) { return xy.segment(a.dim, b.dim); }
};

// A differentiable operation on a fixed list of input vectors. `vjp` maps
// (inputs, output cotangent) to one cotangent per input and is linear in
// the cotangent.
struct Primitive {
  using Forward = std::function<Vector(std::span<const Vector>)>;
  using Vjp = std::function<std::vector<Vector>(std::span<const Vector>, const Vector&)>;

  std::string name;
  std::vector<std::size_t> in_dims;
  std::size_t out_dim = 0;
  Forward forward;
  Vjp vjp;
};

using PrimitivePtr = std::shared_ptr<const Primitive>;

namespace prim {

// (W, x) ↦ W x with W stored row-major as rows·cols entries.
PrimitivePtr linear(std::size_t rows, std::size_t cols);
// (b, x) ↦ x + b
PrimitivePtr bias_add(std::size_t n);
PrimitivePtr tanh(std::size_t n);
// Subgradient 0 at 0.
PrimitivePtr relu(std::size_t n);
PrimitivePtr sigmoid(std::size_t n);
PrimitivePtr add(std::size_t n);
PrimitivePtr mul(std::size_t n);
PrimitivePtr negate(std::size_t n);
// ℝ^n → ℝ
PrimitivePtr sum(std::size_t n);
// (a, b) ↦ Σ (a_i − b_i)²
PrimitivePtr squared_error(std::size_t n);
// x ↦ x[offset, offset + len); wiring for parameter vectors.
PrimitivePtr slice(std::size_t n, std::size_t offset, std::size_t len);

}  // namespace prim

// Primitive factories by name, configured from JSON attributes. Used by the
// JSON graph format.
class PrimitiveRegistry {
 public:
  using Factory = std::function<PrimitivePtr(const nlohmann::json& attrs)>;

  static const PrimitiveRegistry& builtin();

  void add(std::string name, Factory factory);
  bool contains(const std::string& name) const { return factories_.count(name) > 0; }
  std::vector<std::string> names() const;
  // Throws std::invalid_argument for unknown names or bad attributes.
  PrimitivePtr make(const std::string& name, const nlohmann::json& attrs) const;

 private:
  std::map<std::string, Factory> factories_;
};

// A parametrised smooth map ℝ^p × ℝ^n → ℝ^m as a DAG of primitives. Nodes
// are stored in topological order.
class SmoothMap {
 public:
  struct Wire {
    enum class Source { kParam, kInput, kNode };
    Source source = Source::kInput;
    std::size_t node = 0;

    static Wire param() { return {Source::kParam, 0}; }
    static Wire input() { return {Source::kInput, 0}; }
    static Wire of(std::size_t node) { return {Source::kNode, node}; }
    friend bool operator==(const Wire&, const Wire&) = default;
  };

  struct Node {
    PrimitivePtr op;
    std::vector<Wire> inputs;
  };

  std::size_t param_dim() const noexcept { return param_dim_; }
  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Wire& output() const noexcept { return output_; }
  // Identifies the graph; copies share it.
  std::uint64_t id() const noexcept { return id_; }

  std::size_t wire_dim(const Wire& w) const;

  // y = x with no parameters.
  static SmoothMap identity(std::size_t n);

 private:
  friend class SmoothMapBuilder;
  SmoothMap() = default;

  std::size_t param_dim_ = 0;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::vector<Node> nodes_;
  Wire output_;
  std::uint64_t id_ = 0;
};

class SmoothMapBuilder {
 public:
  using Wire = SmoothMap::Wire;

  SmoothMapBuilder(std::size_t param_dim, std::size_t in_dim);

  Wire param() const { return Wire::param(); }
  Wire input() const { return Wire::input(); }
  std::size_t dim(const Wire& w) const;

  // Throws DimensionError when wire dims disagree with the primitive.
  Wire apply(PrimitivePtr op, std::vector<Wire> inputs);
  // Parameter entries [offset, offset + len).
  Wire param_slice(std::size_t offset, std::size_t len);

  // Throws std::invalid_argument if some node does not feed the output.
  SmoothMap build(Wire output) const;

 private:
  SmoothMap graph_;
};

// f then g. The parameter vector is (p_g, p_f): the second map's
// parameters come first, matching parametrised composition.
SmoothMap sequence(const SmoothMap& f, const SmoothMap& g);

// Minimal JSON graph description:
//   {"param_dim": p, "in_dim": n,
//    "nodes": [{"op": "linear", "rows": 2, "cols": 3, "inputs": ["param[0:6]", "input"]},
//              {"op": "tanh", "n": 2, "inputs": ["0"]}],
//    "output": "1"}
// Wire names: "param", "input", "param[a:b]" (a parameter slice), or a node
// index. Throws ParseError with a JSON path.
SmoothMap smooth_map_from_json(const nlohmann::json& j,
                               const PrimitiveRegistry& registry = PrimitiveRegistry::builtin());

// Inputs seen by every node during one forward evaluation.
struct Tape {
  std::uint64_t graph_id = 0;
  std::vector<std::vector<Vector>> node_inputs;
};

struct ForwardResult {
  Vector y;
  Tape tape;
};

struct Cotangents {
  Vector dp;
  Vector dx;
};

// Throws DimensionError on mismatched p or x, NumericError naming the node
// when a non-finite value appears.
ForwardResult forward_eval(const SmoothMap& f, const Vector& p, const Vector& x);

// Reverse sweep; cotangents of shared wires are summed. Throws
// std::invalid_argument when the tape came from another graph.
Cotangents backward_eval(const SmoothMap& f, const Tape& tape, const Vector& dy);

}  // namespace paraoptic

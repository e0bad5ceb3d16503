#include "paraoptic/smooth.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <regex>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "paraoptic/error.hpp"

namespace paraoptic {

Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

Vector SmoothFn::operator()(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != in_.dim) {
    throw DimensionError("smooth map expects ℝ^" + std::to_string(in_.dim) + ", got ℝ^" +
                         std::to_string(x.size()));
  }
  Vector y = fn_(x);
  if (static_cast<std::size_t>(y.size()) != out_.dim) {
    throw DimensionError("smooth map promised ℝ^" + std::to_string(out_.dim) +
                         ", produced ℝ^" + std::to_string(y.size()));
  }
  return y;
}

// ------------------------------------------------------------ SmoothBase

SmoothFn SmoothBase::identity(Space a) {
  return SmoothFn(a, a, [](const Vector& x) { return x; });
}

SmoothFn SmoothBase::compose(const SmoothFn& f, const SmoothFn& g) {
  if (!(f.out() == g.in())) {
    throw CompositionError("cannot compose " + describe(f.in()) + " → " + describe(f.out()) +
                           " with " + describe(g.in()) + " → " + describe(g.out()));
  }
  return SmoothFn(f.in(), g.out(), [f, g](const Vector& x) { return g(f(x)); });
}

SmoothFn SmoothBase::tensor(const SmoothFn& f, const SmoothFn& g) {
  const auto a = f.in().dim;
  const auto b = g.in().dim;
  return SmoothFn(product(f.in(), g.in()), product(f.out(), g.out()),
                  [f, g, a, b](const Vector& x) {
                    return concat(f(x.head(a)), g(x.segment(a, b)));
                  });
}

SmoothFn SmoothBase::fanout(const SmoothFn& f, const SmoothFn& g) {
  if (!(f.in() == g.in())) {
    throw CompositionError("cannot pair maps out of " + describe(f.in()) + " and " +
                           describe(g.in()));
  }
  return SmoothFn(f.in(), product(f.out(), g.out()),
                  [f, g](const Vector& x) { return concat(f(x), g(x)); });
}

SmoothFn SmoothBase::proj1(Space a, Space b) {
  return SmoothFn(product(a, b), a, [n = a.dim](const Vector& x) -> Vector { return x.head(n); });
}

SmoothFn SmoothBase::proj2(Space a, Space b) {
  return SmoothFn(product(a, b), b, [a, b](const Vector& x) -> Vector {
    return x.segment(a.dim, b.dim);
  });
}

SmoothFn SmoothBase::terminal(Space a) {
  return SmoothFn(a, unit(), [](const Vector&) { return Vector(0); });
}

SmoothFn SmoothBase::point(Space a, const Vector& x) {
  return SmoothFn(unit(), a, [x](const Vector&) { return x; });
}

// ------------------------------------------------------------ primitives

namespace prim {
namespace {

PrimitivePtr make(std::string name, std::vector<std::size_t> in_dims, std::size_t out_dim,
                  Primitive::Forward fwd, Primitive::Vjp vjp) {
  return std::make_shared<const Primitive>(
      Primitive{std::move(name), std::move(in_dims), out_dim, std::move(fwd), std::move(vjp)});
}

template <class F, class D>
PrimitivePtr unary(std::string name, std::size_t n, F f, D df) {
  return make(
      std::move(name), {n}, n,
      [f](std::span<const Vector> in) -> Vector { return in[0].unaryExpr(f); },
      [df](std::span<const Vector> in, const Vector& ct) {
        return std::vector<Vector>{in[0].unaryExpr(df).cwiseProduct(ct)};
      });
}

}  // namespace

PrimitivePtr linear(std::size_t rows, std::size_t cols) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return make(
      "linear", {rows * cols, cols}, rows,
      [rows, cols](std::span<const Vector> in) -> Vector {
        Eigen::Map<const RowMajor> w(in[0].data(), rows, cols);
        return w * in[1];
      },
      [rows, cols](std::span<const Vector> in, const Vector& ct) {
        Eigen::Map<const RowMajor> w(in[0].data(), rows, cols);
        Vector dw(rows * cols);
        Eigen::Map<RowMajor>(dw.data(), rows, cols) = ct * in[1].transpose();
        Vector dx = w.transpose() * ct;
        return std::vector<Vector>{std::move(dw), std::move(dx)};
      });
}

PrimitivePtr bias_add(std::size_t n) {
  return make(
      "bias_add", {n, n}, n,
      [](std::span<const Vector> in) -> Vector { return in[1] + in[0]; },
      [](std::span<const Vector>, const Vector& ct) { return std::vector<Vector>{ct, ct}; });
}

PrimitivePtr tanh(std::size_t n) {
  return unary(
      "tanh", n, [](double v) { return std::tanh(v); },
      [](double v) {
        const double t = std::tanh(v);
        return 1.0 - t * t;
      });
}

PrimitivePtr relu(std::size_t n) {
  return unary(
      "relu", n, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

PrimitivePtr sigmoid(std::size_t n) {
  auto s = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  return unary("sigmoid", n, s, [s](double v) {
    const double y = s(v);
    return y * (1.0 - y);
  });
}

PrimitivePtr add(std::size_t n) {
  return make(
      "add", {n, n}, n, [](std::span<const Vector> in) -> Vector { return in[0] + in[1]; },
      [](std::span<const Vector>, const Vector& ct) { return std::vector<Vector>{ct, ct}; });
}

PrimitivePtr mul(std::size_t n) {
  return make(
      "mul", {n, n}, n,
      [](std::span<const Vector> in) -> Vector { return in[0].cwiseProduct(in[1]); },
      [](std::span<const Vector> in, const Vector& ct) {
        return std::vector<Vector>{in[1].cwiseProduct(ct), in[0].cwiseProduct(ct)};
      });
}

PrimitivePtr negate(std::size_t n) {
  return make(
      "negate", {n}, n, [](std::span<const Vector> in) -> Vector { return -in[0]; },
      [](std::span<const Vector>, const Vector& ct) { return std::vector<Vector>{-ct}; });
}

PrimitivePtr sum(std::size_t n) {
  return make(
      "sum", {n}, 1,
      [](std::span<const Vector> in) -> Vector { return Vector::Constant(1, in[0].sum()); },
      [n](std::span<const Vector>, const Vector& ct) {
        return std::vector<Vector>{Vector::Constant(n, ct[0])};
      });
}

PrimitivePtr squared_error(std::size_t n) {
  return make(
      "squared_error", {n, n}, 1,
      [](std::span<const Vector> in) -> Vector {
        return Vector::Constant(1, (in[0] - in[1]).squaredNorm());
      },
      [](std::span<const Vector> in, const Vector& ct) {
        Vector d = 2.0 * ct[0] * (in[0] - in[1]);
        Vector neg = -d;
        return std::vector<Vector>{std::move(d), std::move(neg)};
      });
}

PrimitivePtr slice(std::size_t n, std::size_t offset, std::size_t len) {
  if (offset + len > n) {
    throw DimensionError("slice [" + std::to_string(offset) + ", " +
                         std::to_string(offset + len) + ") out of range for ℝ^" +
                         std::to_string(n));
  }
  return make(
      "slice", {n}, len,
      [offset, len](std::span<const Vector> in) -> Vector { return in[0].segment(offset, len); },
      [n, offset, len](std::span<const Vector>, const Vector& ct) {
        Vector d = Vector::Zero(n);
        d.segment(offset, len) = ct;
        return std::vector<Vector>{std::move(d)};
      });
}

}  // namespace prim

// ------------------------------------------------------------ registry

const PrimitiveRegistry& PrimitiveRegistry::builtin() {
  static const PrimitiveRegistry registry = [] {
    PrimitiveRegistry r;
    auto dim = [](const nlohmann::json& a, const char* key) {
      if (!a.contains(key) || !a.at(key).is_number_unsigned()) {
        throw std::invalid_argument(std::string("missing unsigned attribute \"") + key + "\"");
      }
      return a.at(key).get<std::size_t>();
    };
    r.add("linear", [dim](const auto& a) { return prim::linear(dim(a, "rows"), dim(a, "cols")); });
    r.add("bias_add", [dim](const auto& a) { return prim::bias_add(dim(a, "n")); });
    r.add("tanh", [dim](const auto& a) { return prim::tanh(dim(a, "n")); });
    r.add("relu", [dim](const auto& a) { return prim::relu(dim(a, "n")); });
    r.add("sigmoid", [dim](const auto& a) { return prim::sigmoid(dim(a, "n")); });
    r.add("add", [dim](const auto& a) { return prim::add(dim(a, "n")); });
    r.add("mul", [dim](const auto& a) { return prim::mul(dim(a, "n")); });
    r.add("negate", [dim](const auto& a) { return prim::negate(dim(a, "n")); });
    r.add("sum", [dim](const auto& a) { return prim::sum(dim(a, "n")); });
    r.add("squared_error", [dim](const auto& a) { return prim::squared_error(dim(a, "n")); });
    r.add("slice", [dim](const auto& a) {
      return prim::slice(dim(a, "n"), dim(a, "offset"), dim(a, "len"));
    });
    return r;
  }();
  return registry;
}

void PrimitiveRegistry::add(std::string name, Factory factory) {
  factories_[std::move(name)] = std::move(factory);
}

std::vector<std::string> PrimitiveRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

PrimitivePtr PrimitiveRegistry::make(const std::string& name, const nlohmann::json& attrs) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw std::invalid_argument("unknown primitive \"" + name + "\"");
  return it->second(attrs);
}

// ------------------------------------------------------------ SmoothMap

namespace {
std::atomic<std::uint64_t> next_graph_id{1};
}

std::size_t SmoothMap::wire_dim(const Wire& w) const {
  switch (w.source) {
    case Wire::Source::kParam:
      return param_dim_;
    case Wire::Source::kInput:
      return in_dim_;
    case Wire::Source::kNode:
      return nodes_.at(w.node).op->out_dim;
  }
  return 0;
}

SmoothMap SmoothMap::identity(std::size_t n) {
  return SmoothMapBuilder(0, n).build(Wire::input());
}

SmoothMapBuilder::SmoothMapBuilder(std::size_t param_dim, std::size_t in_dim) {
  graph_.param_dim_ = param_dim;
  graph_.in_dim_ = in_dim;
}

std::size_t SmoothMapBuilder::dim(const Wire& w) const {
  if (w.source == Wire::Source::kNode && w.node >= graph_.nodes_.size()) {
    throw std::invalid_argument("wire refers to node " + std::to_string(w.node) +
                                " which does not exist yet");
  }
  return graph_.wire_dim(w);
}

SmoothMapBuilder::Wire SmoothMapBuilder::apply(PrimitivePtr op, std::vector<Wire> inputs) {
  if (inputs.size() != op->in_dims.size()) {
    throw DimensionError(op->name + " takes " + std::to_string(op->in_dims.size()) +
                         " inputs, got " + std::to_string(inputs.size()));
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (dim(inputs[i]) != op->in_dims[i]) {
      throw DimensionError(op->name + " input " + std::to_string(i) + " expects ℝ^" +
                           std::to_string(op->in_dims[i]) + ", wire carries ℝ^" +
                           std::to_string(dim(inputs[i])));
    }
  }
  graph_.nodes_.push_back({std::move(op), std::move(inputs)});
  return Wire::of(graph_.nodes_.size() - 1);
}

SmoothMapBuilder::Wire SmoothMapBuilder::param_slice(std::size_t offset, std::size_t len) {
  return apply(prim::slice(graph_.param_dim_, offset, len), {param()});
}

SmoothMap SmoothMapBuilder::build(Wire output) const {
  SmoothMap g = graph_;
  g.out_dim_ = dim(output);
  g.output_ = output;
  std::vector<bool> live(g.nodes_.size(), false);
  if (output.source == Wire::Source::kNode) live[output.node] = true;
  for (std::size_t i = g.nodes_.size(); i-- > 0;) {
    if (!live[i]) {
      throw std::invalid_argument("node " + std::to_string(i) + " (" + g.nodes_[i].op->name +
                                  ") does not feed the output");
    }
    for (const auto& w : g.nodes_[i].inputs) {
      if (w.source == Wire::Source::kNode) live[w.node] = true;
    }
  }
  g.id_ = next_graph_id.fetch_add(1);
  return g;
}

SmoothMap sequence(const SmoothMap& f, const SmoothMap& g) {
  if (f.out_dim() != g.in_dim()) {
    throw CompositionError("cannot sequence a map into ℝ^" + std::to_string(f.out_dim()) +
                           " with a map out of ℝ^" + std::to_string(g.in_dim()));
  }
  using Wire = SmoothMap::Wire;
  const std::size_t pg = g.param_dim();
  const std::size_t pf = f.param_dim();
  SmoothMapBuilder b(pg + pf, f.in_dim());

  // Parameter slices are materialised only when referenced.
  std::optional<Wire> f_param, g_param;
  auto param_for = [&](std::optional<Wire>& slot, std::size_t offset, std::size_t len) {
    if (!slot) slot = (offset == 0 && len == pg + pf) ? b.param() : b.param_slice(offset, len);
    return *slot;
  };

  std::vector<Wire> f_nodes;
  auto map_f = [&](const Wire& w) -> Wire {
    switch (w.source) {
      case Wire::Source::kParam:
        return param_for(f_param, pg, pf);
      case Wire::Source::kInput:
        return b.input();
      case Wire::Source::kNode:
        return f_nodes[w.node];
    }
    return w;
  };
  for (const auto& node : f.nodes()) {
    std::vector<Wire> ins;
    for (const auto& w : node.inputs) ins.push_back(map_f(w));
    f_nodes.push_back(b.apply(node.op, std::move(ins)));
  }
  const Wire f_out = map_f(f.output());

  std::vector<Wire> g_nodes;
  auto map_g = [&](const Wire& w) -> Wire {
    switch (w.source) {
      case Wire::Source::kParam:
        return param_for(g_param, 0, pg);
      case Wire::Source::kInput:
        return f_out;
      case Wire::Source::kNode:
        return g_nodes[w.node];
    }
    return w;
  };
  for (const auto& node : g.nodes()) {
    std::vector<Wire> ins;
    for (const auto& w : node.inputs) ins.push_back(map_g(w));
    g_nodes.push_back(b.apply(node.op, std::move(ins)));
  }
  return b.build(map_g(g.output()));
}

// ------------------------------------------------------------ JSON graphs

SmoothMap smooth_map_from_json(const nlohmann::json& j, const PrimitiveRegistry& registry) {
  using Wire = SmoothMap::Wire;
  auto require_dim = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
      throw ParseError(std::string("/") + key, "expected a nonnegative integer");
    }
    return j.at(key).get<std::size_t>();
  };
  if (!j.is_object()) throw ParseError("", "graph description must be an object");
  SmoothMapBuilder b(require_dim("param_dim"), require_dim("in_dim"));

  if (!j.contains("nodes") || !j.at("nodes").is_array()) {
    throw ParseError("/nodes", "expected an array");
  }
  static const std::regex slice_re(R"(param\[(\d+):(\d+)\])");
  static const std::regex index_re(R"(\d+)");
  // User node indices map onto builder wires; "param[a:b]" adds slice nodes.
  std::vector<Wire> user_nodes;
  auto wire = [&](const nlohmann::json& w, const std::string& path) -> Wire {
    if (!w.is_string()) throw ParseError(path, "wire must be a string");
    const auto s = w.get<std::string>();
    if (s == "param") return b.param();
    if (s == "input") return b.input();
    std::smatch m;
    try {
      if (std::regex_match(s, m, slice_re)) {
        const auto lo = std::stoul(m[1]);
        const auto hi = std::stoul(m[2]);
        if (hi < lo) throw ParseError(path, "reversed parameter slice \"" + s + "\"");
        return b.param_slice(lo, hi - lo);
      }
      if (std::regex_match(s, index_re)) {
        const auto idx = std::stoul(s);
        if (idx >= user_nodes.size()) throw ParseError(path, "wire refers to a later node");
        return user_nodes[idx];
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(path, std::string("bad wire \"") + s + "\": " + e.what());
    }
    throw ParseError(path, "bad wire \"" + s + "\"");
  };

  const auto& nodes = j.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto path = "/nodes/" + std::to_string(i);
    const auto& n = nodes[i];
    if (!n.is_object() || !n.contains("op") || !n.at("op").is_string()) {
      throw ParseError(path + "/op", "expected a primitive name");
    }
    if (!n.contains("inputs") || !n.at("inputs").is_array()) {
      throw ParseError(path + "/inputs", "expected an array of wires");
    }
    std::vector<Wire> ins;
    for (std::size_t k = 0; k < n.at("inputs").size(); ++k) {
      ins.push_back(wire(n.at("inputs")[k], path + "/inputs/" + std::to_string(k)));
    }
    try {
      auto op = registry.make(n.at("op").get<std::string>(), n);
      user_nodes.push_back(b.apply(std::move(op), std::move(ins)));
    } catch (const std::exception& e) {
      throw ParseError(path, e.what());
    }
  }
  if (!j.contains("output")) throw ParseError("/output", "missing output wire");
  try {
    return b.build(wire(j.at("output"), "/output"));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError("/output", e.what());
  }
}

// ------------------------------------------------------------ evaluation

ForwardResult forward_eval(const SmoothMap& f, const Vector& p, const Vector& x) {
  using Wire = SmoothMap::Wire;
  if (static_cast<std::size_t>(p.size()) != f.param_dim()) {
    throw DimensionError("parameter vector has dimension " + std::to_string(p.size()) +
                         ", graph expects " + std::to_string(f.param_dim()));
  }
  if (static_cast<std::size_t>(x.size()) != f.in_dim()) {
    throw DimensionError("input vector has dimension " + std::to_string(x.size()) +
                         ", graph expects " + std::to_string(f.in_dim()));
  }
  if (!all_finite(p) || !all_finite(x)) throw NumericError("non-finite parameter or input");

  const auto& nodes = f.nodes();
  std::vector<Vector> values(nodes.size());
  auto value = [&](const Wire& w) -> const Vector& {
    switch (w.source) {
      case Wire::Source::kParam:
        return p;
      case Wire::Source::kInput:
        return x;
      case Wire::Source::kNode:
        break;
    }
    return values[w.node];
  };

  Tape tape{f.id(), std::vector<std::vector<Vector>>(nodes.size())};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& ins = tape.node_inputs[i];
    ins.reserve(nodes[i].inputs.size());
    for (const auto& w : nodes[i].inputs) ins.push_back(value(w));
    values[i] = nodes[i].op->forward(ins);
    if (!all_finite(values[i])) {
      throw NumericError("node " + std::to_string(i) + " (" + nodes[i].op->name +
                         ") produced a non-finite value");
    }
  }
  return {value(f.output()), std::move(tape)};
}

Cotangents backward_eval(const SmoothMap& f, const Tape& tape, const Vector& dy) {
  using Wire = SmoothMap::Wire;
  const auto& nodes = f.nodes();
  if (tape.graph_id != f.id() || tape.node_inputs.size() != nodes.size()) {
    throw std::invalid_argument("tape was recorded by a different graph");
  }
  if (static_cast<std::size_t>(dy.size()) != f.out_dim()) {
    throw DimensionError("output cotangent has dimension " + std::to_string(dy.size()) +
                         ", graph output is ℝ^" + std::to_string(f.out_dim()));
  }
  Cotangents out{Vector::Zero(f.param_dim()), Vector::Zero(f.in_dim())};
  std::vector<Vector> grads(nodes.size());
  std::vector<bool> touched(nodes.size(), false);
  auto accumulate = [&](const Wire& w, const Vector& g) {
    switch (w.source) {
      case Wire::Source::kParam:
        out.dp += g;
        return;
      case Wire::Source::kInput:
        out.dx += g;
        return;
      case Wire::Source::kNode:
        if (touched[w.node]) {
          grads[w.node] += g;
        } else {
          grads[w.node] = g;
          touched[w.node] = true;
        }
        return;
    }
  };
  accumulate(f.output(), dy);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (!touched[i]) continue;
    const auto partials = nodes[i].op->vjp(tape.node_inputs[i], grads[i]);
    for (std::size_t k = 0; k < partials.size(); ++k) accumulate(nodes[i].inputs[k], partials[k]);
  }
  return out;
}

}  // namespace paraoptic

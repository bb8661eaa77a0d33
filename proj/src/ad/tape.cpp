#include "pmcvol/ad/tape.hpp"

#include <json.hpp>

#include <ostream>

namespace pmcvol::ad {

const char* op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Const: return "const";
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
        case Op::Neg: return "neg";
        case Op::AddConst: return "add_const";
        case Op::MulConst: return "mul_const";
        case Op::Tanh: return "tanh";
        case Op::Exp: return "exp";
        case Op::Log: return "ln";
        case Op::Square: return "square";
        case Op::Softplus: return "softplus";
    }
    return "?";
}

std::vector<double> Tape::backward(const Var& output) const {
    if (!owns(output)) {
        throw UsageError("backward: output node is not on this tape");
    }
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[static_cast<std::size_t>(output.id())] = 1.0;
    for (auto i = static_cast<std::int64_t>(output.id()); i >= 0; --i) {
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        const double g = adj[static_cast<std::size_t>(i)];
        if (g == 0.0) {
            continue;
        }
        const auto a = static_cast<std::size_t>(n.a);
        const auto b = static_cast<std::size_t>(n.b);
        switch (n.op) {
            case Op::Leaf:
            case Op::Const:
                break;
            case Op::Add:
                adj[a] += g;
                adj[b] += g;
                break;
            case Op::Sub:
                adj[a] += g;
                adj[b] -= g;
                break;
            case Op::Mul:
                adj[a] += g * nodes_[b].value;
                adj[b] += g * nodes_[a].value;
                break;
            case Op::Div:
                adj[a] += g / nodes_[b].value;
                adj[b] -= g * n.value / nodes_[b].value;
                break;
            case Op::Neg:
                adj[a] -= g;
                break;
            case Op::AddConst:
                adj[a] += g;
                break;
            case Op::MulConst:
                adj[a] += g * n.aux;
                break;
            case Op::Tanh:
                adj[a] += g * (1.0 - n.value * n.value);
                break;
            case Op::Exp:
                adj[a] += g * n.value;
                break;
            case Op::Log:
                adj[a] += g / nodes_[a].value;
                break;
            case Op::Square:
                adj[a] += g * 2.0 * nodes_[a].value;
                break;
            case Op::Softplus:
                adj[a] += g * detail::sigmoid(nodes_[a].value);
                break;
        }
    }
    return adj;
}

void Tape::dump_json(std::ostream& out) const {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        nlohmann::json inputs = nlohmann::json::array();
        if (n.a >= 0) inputs.push_back(n.a);
        if (n.b >= 0) inputs.push_back(n.b);
        nodes.push_back({{"id", i}, {"op", op_name(n.op)}, {"inputs", inputs}, {"value", n.value}});
    }
    out << nlohmann::json{{"nodes", nodes}}.dump(2) << '\n';
}

Var sum(std::span<const Var> xs) {
    if (xs.empty()) {
        throw UsageError("sum of an empty list");
    }
    Var acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        acc = acc + xs[i];
    }
    return acc;
}

}  // namespace pmcvol::ad

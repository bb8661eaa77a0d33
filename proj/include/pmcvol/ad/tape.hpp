#pragma once

#include "pmcvol/errors.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmcvol::ad {

/// ln of a nonpositive value or division by zero while recording.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Mixing tapes, or differentiating a node that is not on the tape.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Op : std::uint8_t {
    Leaf,
    Const,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    AddConst,
    MulConst,
    Tanh,
    Exp,
    Log,
    Square,
    Softplus,
};

const char* op_name(Op op);

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid while the tape is not cleared.
class Var {
public:
    Var() = default;

    [[nodiscard]] double value() const;
    [[nodiscard]] std::int32_t id() const { return id_; }
    [[nodiscard]] Tape* tape() const { return tape_; }

private:
    friend class Tape;
    Var(Tape* tape, std::int32_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::int32_t id_ = -1;
};

/// Append-only scalar computation graph. Inputs always precede outputs, so a single
/// reverse sweep accumulates adjoints. Every recorded value is checked for finiteness.
class Tape {
public:
    struct Node {
        Op op = Op::Leaf;
        std::int32_t a = -1;
        std::int32_t b = -1;
        double value = 0.0;
        double aux = 0.0;
    };

    Var variable(double value) { return push(Op::Leaf, -1, -1, value); }
    Var constant(double value) { return push(Op::Const, -1, -1, value); }

    /// Drops all nodes but keeps capacity.
    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const Node& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
    [[nodiscard]] bool owns(const Var& v) const {
        return v.tape_ == this && v.id_ >= 0 && static_cast<std::size_t>(v.id_) < nodes_.size();
    }

    /// d output / d node for every node id. Throws UsageError if `output` is foreign.
    [[nodiscard]] std::vector<double> backward(const Var& output) const;

    /// Graph dump for inspection: {"nodes":[{"id","op","inputs","value"}...]}.
    void dump_json(std::ostream& out) const;

    Var push(Op op, std::int32_t a, std::int32_t b, double value, double aux = 0.0) {
        if (!std::isfinite(value)) {
            throw NumericalError("node " + std::to_string(nodes_.size()) + " (" + op_name(op) +
                                 ") produced a nonfinite value");
        }
        nodes_.push_back({op, a, b, value, aux});
        return {this, static_cast<std::int32_t>(nodes_.size() - 1)};
    }

private:
    std::vector<Node> nodes_;
};

inline double Var::value() const { return tape_->node(id_).value; }

namespace detail {

inline Tape& common_tape(const Var& x, const Var& y) {
    if (x.tape() == nullptr || x.tape() != y.tape()) {
        throw UsageError("operands live on different tapes");
    }
    return *x.tape();
}

inline Tape& tape_of(const Var& x) {
    if (x.tape() == nullptr) {
        throw UsageError("operand is not attached to a tape");
    }
    return *x.tape();
}

inline double softplus_value(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace detail

inline Var operator+(const Var& x, const Var& y) {
    auto& t = detail::common_tape(x, y);
    return t.push(Op::Add, x.id(), y.id(), x.value() + y.value());
}
inline Var operator-(const Var& x, const Var& y) {
    auto& t = detail::common_tape(x, y);
    return t.push(Op::Sub, x.id(), y.id(), x.value() - y.value());
}
inline Var operator*(const Var& x, const Var& y) {
    auto& t = detail::common_tape(x, y);
    return t.push(Op::Mul, x.id(), y.id(), x.value() * y.value());
}
inline Var operator/(const Var& x, const Var& y) {
    auto& t = detail::common_tape(x, y);
    if (y.value() == 0.0) {
        throw DomainError("division by zero at node " + std::to_string(y.id()));
    }
    return t.push(Op::Div, x.id(), y.id(), x.value() / y.value());
}
inline Var operator-(const Var& x) {
    return detail::tape_of(x).push(Op::Neg, x.id(), -1, -x.value());
}
inline Var operator+(const Var& x, double c) {
    return detail::tape_of(x).push(Op::AddConst, x.id(), -1, x.value() + c, c);
}
inline Var operator+(double c, const Var& x) { return x + c; }
inline Var operator-(const Var& x, double c) { return x + (-c); }
inline Var operator-(double c, const Var& x) { return (-x) + c; }
inline Var operator*(const Var& x, double c) {
    return detail::tape_of(x).push(Op::MulConst, x.id(), -1, x.value() * c, c);
}
inline Var operator*(double c, const Var& x) { return x * c; }
inline Var operator/(const Var& x, double c) {
    if (c == 0.0) {
        throw DomainError("division by zero constant at node " + std::to_string(x.id()));
    }
    return x * (1.0 / c);
}

inline Var tanh(const Var& x) {
    return detail::tape_of(x).push(Op::Tanh, x.id(), -1, std::tanh(x.value()));
}
inline Var exp(const Var& x) {
    return detail::tape_of(x).push(Op::Exp, x.id(), -1, std::exp(x.value()));
}
inline Var log(const Var& x) {
    if (!(x.value() > 0.0)) {
        throw DomainError("ln of nonpositive value at node " + std::to_string(x.id()));
    }
    return detail::tape_of(x).push(Op::Log, x.id(), -1, std::log(x.value()));
}
inline Var square(const Var& x) {
    return detail::tape_of(x).push(Op::Square, x.id(), -1, x.value() * x.value());
}
inline Var softplus(const Var& x) {
    return detail::tape_of(x).push(Op::Softplus, x.id(), -1, detail::softplus_value(x.value()));
}

/// Left fold of additions. Throws UsageError on an empty span.
Var sum(std::span<const Var> xs);

// Plain-double twins so model code can be written once for double and Var.
inline double tanh(double x) { return std::tanh(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double square(double x) { return x * x; }
inline double softplus(double x) { return detail::softplus_value(x); }

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }

}  // namespace pmcvol::ad

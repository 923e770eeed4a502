#pragma once

#include "rfa/arcast.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfa {

class NoQualifyingColumn : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major n x n bit matrix as produced by interactive consistency (row i = node i's input).
class BitMatrix {
public:
    BitMatrix() = default;
    /// Throws std::invalid_argument unless bits has n*n characters from {'0','1'}.
    BitMatrix(std::size_t n, std::string bits);

    std::size_t size() const { return n_; }
    bool at(std::size_t row, std::size_t col) const { return bits_[row * n_ + col] == '1'; }
    std::string row(std::size_t r) const { return bits_.substr(r * n_, n_); }
    std::size_t column_weight(std::size_t col) const;
    const std::string& bits() const { return bits_; }
    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::string bits_;
};

/// Smallest column index with at least t+1 ones. Throws NoQualifyingColumn if none.
std::size_t elect_column(const BitMatrix& b, std::size_t t);

/// The agreement layer above the n broadcasts: completion bookkeeping, the IC input
/// snapshot, column election and the final output. Drivable on its own.
class AgreementCore {
public:
    AgreementCore(std::size_t n, std::size_t t, NodeId self);

    /// Instance j completed with output v (local frame).
    void on_instance_output(InstanceId j, const UnitVector& v, Effects& fx);
    /// The common IC matrix arrived (flattened bits).
    void on_ic_result(const std::string& bits, Effects& fx);

    /// 0: collecting outputs, 1: IC input submitted, 2: column elected.
    int phase() const { return phase_; }
    const std::vector<std::optional<UnitVector>>& w() const { return w_; }
    const std::string& a() const { return a_; }
    const std::optional<BitMatrix>& b() const { return b_; }
    std::optional<std::size_t> k() const { return k_; }
    const std::optional<UnitVector>& output() const { return output_; }
    std::size_t completed() const;

private:
    void try_output(Effects& fx);

    std::size_t n_;
    std::size_t t_;
    NodeId self_;
    std::vector<std::optional<UnitVector>> w_;
    std::string a_;
    std::optional<BitMatrix> b_;
    std::optional<std::size_t> k_;
    std::optional<UnitVector> output_;
    int phase_ = 0;
};

/// A correct node running the agreement protocol: n broadcast instances (instance j has
/// sender j) plus the agreement layer. IC traffic uses instance id n.
class AAgreeNode : public ProtocolNode {
public:
    AAgreeNode(std::size_t n, std::size_t t, double delta, NodeId self, const UnitVector& input);

    void on_start(Effects& fx) override;
    void on_deliver(const Inbound& msg, Effects& fx) override;
    bool listening(InstanceId instance, Tag tag) const override;
    std::optional<UnitVector> output() const override { return core_.output(); }

    InstanceId ic_instance() const { return static_cast<InstanceId>(n_); }
    const AgreementCore& core() const { return core_; }
    const ArCast& instance(InstanceId j) const { return casts_[j]; }
    bool halted() const { return halted_; }

private:
    void finish(Effects& fx);

    std::size_t n_;
    NodeId self_;
    UnitVector input_;
    std::vector<ArCast> casts_;
    AgreementCore core_;
    bool halted_ = false;
};

} // namespace rfa

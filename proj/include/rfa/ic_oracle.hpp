#pragma once

#include "rfa/agreement.hpp"
#include "rfa/rng.hpp"
#include "rfa/simnet.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rfa {

enum class IcMode : std::uint8_t { strict, core_set };
std::string_view ic_mode_name(IcMode m);
std::optional<IcMode> parse_ic_mode(std::string_view s);

/// Adversary control over the interactive-consistency outcome.
class IcAdversary {
public:
    virtual ~IcAdversary() = default;
    /// Row reported for faulty node `node` (length n, '0'/'1').
    virtual std::string faulty_row(NodeId node, std::size_t n, const std::map<NodeId, std::string>& correct_inputs,
                                   Rng& rng) = 0;
    /// core_set mode: correct rows to replace by zeros. At most t are honoured.
    virtual std::vector<NodeId> drop_set(const std::vector<NodeId>& correct, std::size_t t,
                                         const std::map<NodeId, std::string>& correct_inputs, Rng& rng) = 0;
};

enum class FaultyRowStyle : std::uint8_t { zeros, ones, random, ones_on_faulty };

/// Fixed-style faulty rows; drops a uniformly random set of t correct rows.
class SimpleIcAdversary : public IcAdversary {
public:
    SimpleIcAdversary(FaultyRowStyle style, std::vector<bool> faulty) : style_(style), faulty_(std::move(faulty)) {}

    std::string faulty_row(NodeId node, std::size_t n, const std::map<NodeId, std::string>& correct_inputs,
                           Rng& rng) override;
    std::vector<NodeId> drop_set(const std::vector<NodeId>& correct, std::size_t t,
                                 const std::map<NodeId, std::string>& correct_inputs, Rng& rng) override;

private:
    FaultyRowStyle style_;
    std::vector<bool> faulty_;
};

struct IcOracleConfig {
    IcMode mode = IcMode::strict;
    std::shared_ptr<IcAdversary> adversary; // null: faulty rows are zeros, nothing dropped
};

/// One-shot evaluation: the common matrix every correct node receives.
BitMatrix ic_execute(const IcOracleConfig& cfg, std::size_t n, std::size_t t, const std::vector<bool>& faulty,
                     const std::map<NodeId, std::string>& inputs, Rng& rng);

/// Network-attached oracle. Collects inputs; once every correct node has submitted, returns
/// one ic_payload envelope per correct node (sender = receiver = that node), which the
/// scheduler then delivers like any other message.
class IcOracle {
public:
    IcOracle(IcOracleConfig cfg, std::size_t n, std::size_t t, std::vector<bool> faulty, InstanceId instance,
             std::uint64_t seed);

    std::vector<MessageEnvelope> submit(NodeId node, const std::string& bits);
    const std::optional<BitMatrix>& result() const { return result_; }

private:
    IcOracleConfig cfg_;
    std::size_t n_;
    std::size_t t_;
    std::vector<bool> faulty_;
    InstanceId instance_;
    Rng rng_;
    std::map<NodeId, std::string> inputs_;
    std::optional<BitMatrix> result_;
};

} // namespace rfa

#include "rfa/ic_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace rfa {

std::string_view ic_mode_name(IcMode m)
{
    return m == IcMode::strict ? "strict" : "core_set";
}

std::optional<IcMode> parse_ic_mode(std::string_view s)
{
    if (s == "strict") return IcMode::strict;
    if (s == "core_set") return IcMode::core_set;
    return std::nullopt;
}

std::string SimpleIcAdversary::faulty_row(NodeId, std::size_t n, const std::map<NodeId, std::string>&, Rng& rng)
{
    std::string row(n, '0');
    for (std::size_t j = 0; j < n; ++j) {
        switch (style_) {
        case FaultyRowStyle::zeros: break;
        case FaultyRowStyle::ones: row[j] = '1'; break;
        case FaultyRowStyle::random: row[j] = rng.chance(0.5) ? '1' : '0'; break;
        case FaultyRowStyle::ones_on_faulty: row[j] = (j < faulty_.size() && faulty_[j]) ? '1' : '0'; break;
        }
    }
    return row;
}

std::vector<NodeId> SimpleIcAdversary::drop_set(const std::vector<NodeId>& correct, std::size_t t,
                                                const std::map<NodeId, std::string>&, Rng& rng)
{
    std::vector<NodeId> pool = correct;
    std::vector<NodeId> out;
    while (out.size() < t && !pool.empty()) {
        const auto i = static_cast<std::size_t>(rng.below(pool.size()));
        out.push_back(pool[i]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

BitMatrix ic_execute(const IcOracleConfig& cfg, std::size_t n, std::size_t t, const std::vector<bool>& faulty,
                     const std::map<NodeId, std::string>& inputs, Rng& rng)
{
    if (faulty.size() != n) throw std::invalid_argument("ic_execute: fault mask size");
    std::vector<NodeId> correct;
    for (NodeId i = 0; i < n; ++i) {
        if (faulty[i]) continue;
        correct.push_back(i);
        const auto it = inputs.find(i);
        if (it == inputs.end()) throw std::invalid_argument("ic_execute: missing input of correct node");
        if (it->second.size() != n || it->second.find_first_not_of("01") != std::string::npos) {
            throw std::invalid_argument("ic_execute: malformed input row");
        }
    }

    std::string bits(n * n, '0');
    for (NodeId i = 0; i < n; ++i) {
        std::string row;
        if (!faulty[i]) {
            row = inputs.at(i);
        } else if (cfg.adversary) {
            row = cfg.adversary->faulty_row(i, n, inputs, rng);
            if (row.size() != n || row.find_first_not_of("01") != std::string::npos) {
                throw std::logic_error("IC adversary produced a malformed row");
            }
        } else {
            row.assign(n, '0');
        }
        bits.replace(i * n, n, row);
    }

    if (cfg.mode == IcMode::core_set && cfg.adversary) {
        auto drops = cfg.adversary->drop_set(correct, t, inputs, rng);
        std::sort(drops.begin(), drops.end());
        drops.erase(std::unique(drops.begin(), drops.end()), drops.end());
        std::size_t dropped = 0;
        for (NodeId d : drops) {
            if (dropped == t) break;
            if (d >= n || faulty[d]) continue;
            bits.replace(d * n, n, std::string(n, '0'));
            ++dropped;
        }
    }
    return BitMatrix(n, std::move(bits));
}

IcOracle::IcOracle(IcOracleConfig cfg, std::size_t n, std::size_t t, std::vector<bool> faulty, InstanceId instance,
                   std::uint64_t seed)
    : cfg_(std::move(cfg)), n_(n), t_(t), faulty_(std::move(faulty)), instance_(instance), rng_(seed)
{
}

std::vector<MessageEnvelope> IcOracle::submit(NodeId node, const std::string& bits)
{
    if (node >= n_ || faulty_[node]) throw std::logic_error("IC input from a faulty or unknown node");
    if (result_ || inputs_.count(node)) throw std::logic_error("duplicate IC input");
    inputs_[node] = bits;

    const auto correct = static_cast<std::size_t>(std::count(faulty_.begin(), faulty_.end(), false));
    if (inputs_.size() < correct) return {};

    result_ = ic_execute(cfg_, n_, t_, faulty_, inputs_, rng_);
    std::vector<MessageEnvelope> out;
    for (NodeId i = 0; i < n_; ++i) {
        if (faulty_[i]) continue;
        MessageEnvelope env;
        env.sender = i;
        env.receiver = i;
        env.instance = instance_;
        env.classical_tag = Tag::ic_payload;
        env.classical_bits = result_->bits();
        out.push_back(std::move(env));
    }
    return out;
}

} // namespace rfa

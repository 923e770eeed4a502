#include "rfa/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace rfa {

void EstimationConfig::validate() const
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (qubits_per_axis < 1) throw std::invalid_argument("qubits_per_axis must be at least 1");
}

QuantumPayload ted_send(const UnitVector& u_local, const LocalFrame& sender_frame, const EstimationConfig& cfg)
{
    return QuantumPayload{sender_frame.to_global(u_local), cfg.qubits_per_axis, false};
}

MeasurementCounts sample_counts(const UnitVector& c, std::int64_t per_axis, Rng& rng)
{
    MeasurementCounts k;
    k.per_axis = per_axis;
    k.plus_x = rng.binomial(per_axis, (1.0 + c.x()) / 2.0);
    k.plus_y = rng.binomial(per_axis, (1.0 + c.y()) / 2.0);
    k.plus_z = rng.binomial(per_axis, (1.0 + c.z()) / 2.0);
    return k;
}

std::optional<UnitVector> estimate_direction(const MeasurementCounts& k)
{
    const double m = static_cast<double>(k.per_axis);
    const double x = 2.0 * static_cast<double>(k.plus_x) / m - 1.0;
    const double y = 2.0 * static_cast<double>(k.plus_y) / m - 1.0;
    const double z = 2.0 * static_cast<double>(k.plus_z) / m - 1.0;
    const double l = std::sqrt(x * x + y * y + z * z);
    if (!(l >= 1e-12)) return std::nullopt;
    return UnitVector(x / l, y / l, z / l);
}

Reception ted_receive(const QuantumPayload& payload, const LocalFrame& receiver_frame, Rng& rng,
                      const EstimationConfig& cfg)
{
    if (payload.qubits_per_axis < 1) throw std::invalid_argument("ted_receive: payload without qubits");
    const UnitVector c = receiver_frame.to_local(payload.true_direction_global);
    if (cfg.ideal_channel) return {c, false};
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (auto v = estimate_direction(sample_counts(c, payload.qubits_per_axis, rng))) return {*v, false};
    }
    return {UnitVector::z_axis(), true};
}

double measure_success_rate(const EstimationConfig& cfg, std::int64_t trials, Rng& rng)
{
    if (trials < 1) throw std::invalid_argument("measure_success_rate: trials must be at least 1");
    cfg.validate();
    std::int64_t ok = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        const LocalFrame sender = random_frame(rng);
        const LocalFrame receiver = random_frame(rng);
        const UnitVector u = random_unit_vector(rng);
        const QuantumPayload p = ted_send(u, sender, cfg);
        const Reception r = ted_receive(p, receiver, rng, cfg);
        if (distance(p.true_direction_global, receiver.to_global(r.direction)) <= cfg.delta) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(trials);
}

double measure_success_rate(double delta, std::int64_t qubits_per_axis, std::int64_t trials, Rng& rng)
{
    return measure_success_rate(EstimationConfig{delta, qubits_per_axis, false}, trials, rng);
}

} // namespace rfa

#pragma once

#include "rfa/geometry.hpp"
#include "rfa/rng.hpp"

#include <cstdint>
#include <optional>

namespace rfa {

/// Parameters of the two-party direction estimation channel.
struct EstimationConfig {
    double delta = 0.02;                  // target accuracy, 0 < delta < 1
    std::int64_t qubits_per_axis = 20000; // m: qubits measured per Pauli axis (3m per message)
    bool ideal_channel = false;           // deliver the exact direction, no sampling

    void validate() const; // throws std::invalid_argument
};

/// What physically travels: m identical qubits per axis, all pointing along a direction.
/// The direction is simulator ground truth; nodes only see measurement statistics.
struct QuantumPayload {
    UnitVector true_direction_global = UnitVector::z_axis();
    std::int64_t qubits_per_axis = 1;
    bool corrupted = false; // prepared by a faulty sender

    bool operator==(const QuantumPayload&) const = default;
};

struct MeasurementCounts {
    std::int64_t plus_x = 0; // number of +1 outcomes per axis
    std::int64_t plus_y = 0;
    std::int64_t plus_z = 0;
    std::int64_t per_axis = 1;
};

/// Sender side: prepares qubits along u, expressed in the sender's frame.
QuantumPayload ted_send(const UnitVector& u_local, const LocalFrame& sender_frame, const EstimationConfig& cfg);

/// Draws k_a ~ Binomial(m, (1 + c_a) / 2) on each axis for a state along c.
MeasurementCounts sample_counts(const UnitVector& c, std::int64_t per_axis, Rng& rng);

/// Frequency estimator: component a = 2 k_a / m - 1, normalised by its length.
/// nullopt when the length is below 1e-12.
std::optional<UnitVector> estimate_direction(const MeasurementCounts& counts);

struct Reception {
    UnitVector direction = UnitVector::z_axis(); // receiver's local frame
    bool channel_failure = false;                // estimator hit zero length twice
};

/// Receiver side. In ideal mode returns the payload direction expressed in the receiver
/// frame. A zero-length estimate is redrawn once from the same stream; if it is zero again
/// the receiver's +z axis is returned with channel_failure set.
Reception ted_receive(const QuantumPayload& payload, const LocalFrame& receiver_frame, Rng& rng,
                      const EstimationConfig& cfg);

/// Fraction of `trials` transmissions (random direction, random sender and receiver frames)
/// whose estimate lands within delta of the sent direction, compared in the global frame.
double measure_success_rate(const EstimationConfig& cfg, std::int64_t trials, Rng& rng);
double measure_success_rate(double delta, std::int64_t qubits_per_axis, std::int64_t trials, Rng& rng);

} // namespace rfa

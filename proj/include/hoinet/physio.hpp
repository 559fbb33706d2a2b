#pragma once

// Beat-to-beat cardiovascular variables: binary variation patterns
// (HV, SV, RP) and hemodynamic series (CO, PR).
//
// Beats are numbered from 1. A derived series carries the number of the beat
// its first value belongs to.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hoinet/info_core.hpp"

namespace hoinet {

/// Column names understood by the derivations.
namespace beat_column {
inline constexpr std::string_view heart_period = "HP";       // ms
inline constexpr std::string_view systolic = "SP";           // mmHg
inline constexpr std::string_view diastolic = "DP";          // mmHg
inline constexpr std::string_view respiration = "RA";        // a.u.
inline constexpr std::string_view mean_pressure = "MAP";     // mmHg
inline constexpr std::string_view impedance_slope = "ZMAX";  // ohm/s
inline constexpr std::string_view ejection_time = "LVET";    // ms
}  // namespace beat_column

class BeatSeries {
public:
    BeatSeries() = default;
    /// Columns must be equally long and finite; HP and LVET, when present,
    /// must be positive.
    BeatSeries(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    std::size_t beats() const { return columns_.empty() ? 0 : columns_.front().size(); }
    bool has(std::string_view name) const;
    const std::vector<double>& column(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
};

template <typename T>
struct BeatIndexed {
    std::size_t first_beat = 1;
    std::vector<T> values;

    std::size_t last_beat() const { return first_beat + values.size() - 1; }
};

enum class DiscreteKind { hv, sv, rp };

std::string_view to_string(DiscreteKind k);
DiscreteKind discrete_kind_from_string(std::string_view s);

/// Binary variation pattern starting at beat 2:
///   HV_n = [HP_{n+1} > HP_n],  n = 2..N-1
///   SV_n = [SP_n > SP_{n-1}],  n = 2..N-1
///   RP_n = [RA_{n+1} > RA_{n+2}], n = 2..N-2 (needs two beats ahead)
/// Ties map to 0.
BeatIndexed<Symbol> derive_discrete(DiscreteKind kind, const BeatSeries& series);

/// Aligned binary dataset of the requested kinds over their common beats.
SymbolDataset derive_discrete_set(std::span<const DiscreteKind> kinds, const BeatSeries& series);

/// CO_n = 60 * beta * ZMAX_n * LVET_n / HP_{n-1} with LVET and HP converted
/// from ms to s; defined for n = 2..N.
BeatIndexed<double> derive_cardiac_output(const BeatSeries& series, double beta);

/// PR_n = MAP_n / CO_n on the beats common to MAP and `co`.
BeatIndexed<double> derive_peripheral_resistance(const BeatSeries& series, const BeatIndexed<double>& co);

}  // namespace hoinet

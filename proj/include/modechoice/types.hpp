#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace modechoice {

/// Configuration problems (bad scenario file, invalid parameter). CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input-data problems (malformed CSV, non-monotone series). CLI exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModeId : std::uint8_t { Car = 0, Motorcycle = 1, PublicTransit = 2 };
inline constexpr int kNumModes = 3;

enum class Ses : std::uint8_t { Low = 0, Mid = 1, High = 2 };
inline constexpr int kNumSes = 3;

enum class Sex : std::uint8_t { F = 0, M = 1 };

/// The seven evaluated mode characteristics. The order is fixed and is the
/// layout of every 7-vector in the model (weights, attribute satisfactions).
enum class AttributeId : std::uint8_t {
    AcquisitionCost = 0,
    OperatingCost = 1,
    Comfort = 2,
    RoadSafety = 3,
    PersonalSecurity = 4,
    TravelTime = 5,
    Emissions = 6,
};
inline constexpr int kNumAttributes = 7;

enum class StrategyKind : std::uint8_t { Repeat = 0, Imitate = 1, Inquire = 2, Deliberate = 3 };
inline constexpr int kNumStrategies = 4;

using WeightVec = std::array<double, kNumAttributes>;
using AttrVec = std::array<double, kNumAttributes>;

inline const char* mode_name(ModeId m) {
    switch (m) {
        case ModeId::Car: return "car";
        case ModeId::Motorcycle: return "moto";
        case ModeId::PublicTransit: return "pub";
    }
    return "?";
}

inline const char* ses_name(Ses s) {
    switch (s) {
        case Ses::Low: return "low";
        case Ses::Mid: return "mid";
        case Ses::High: return "high";
    }
    return "?";
}

inline const char* sex_name(Sex s) { return s == Sex::F ? "F" : "M"; }

inline const char* strategy_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::Repeat: return "repeat";
        case StrategyKind::Imitate: return "imitate";
        case StrategyKind::Inquire: return "inquire";
        case StrategyKind::Deliberate: return "deliberate";
    }
    return "?";
}

inline const char* attribute_name(AttributeId a) {
    switch (a) {
        case AttributeId::AcquisitionCost: return "acquisition_cost";
        case AttributeId::OperatingCost: return "operating_cost";
        case AttributeId::Comfort: return "comfort";
        case AttributeId::RoadSafety: return "road_safety";
        case AttributeId::PersonalSecurity: return "personal_security";
        case AttributeId::TravelTime: return "travel_time";
        case AttributeId::Emissions: return "emissions";
    }
    return "?";
}

/// One commuter. Demographics and preference parameters are immutable after
/// synthesis; the simulation loop owns current_mode, experience and the
/// ownership flags (single writer, synchronous update per decision period).
struct Agent {
    int id = 0;
    Sex sex = Sex::F;
    int age = 0;
    Ses ses = Ses::Low;
    double commute_distance_km = 0.0;
    double income_month = 0.0; // currency units per month
    WeightVec weights{};       // importance per AttributeId, each in [0,1]
    double sat_threshold = 0.5;       // S*: desired satisfaction
    double unc_threshold = 0.5;       // U*: tolerable uncertainty
    double uncertainty_avoidance = 0.5;
    double collectivism = 0.5;
    ModeId current_mode = ModeId::PublicTransit;
    std::array<double, kNumModes> experience{}; // familiarity per mode, in [0,1]
    bool owns_car = false;
    bool owns_moto = false;

    double annual_income() const { return 12.0 * income_month; }
};

/// Per-mode dynamic attribute profile. Mutated only by the policy engine
/// between decision periods (public transit fields only).
struct ModeState {
    double fare_or_opcost_per_km = 0.0; // currency per km
    double acquisition_price = 0.0;     // currency; 0 for public transit
    double base_speed_kmh = 0.0;
    double headway_min = 0.0;           // public only; 0 otherwise
    double comfort_score = 0.0;         // [0,1]
    double security_score = 0.0;        // [0,1]
    double safety_risk = 0.0;           // accidents per 100M km
    double emissions_gpkm = 0.0;        // g CO2 per vehicle-km
};

inline double clamp01(double v) {
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

} // namespace modechoice

#ifndef APERIODIC_LAB_INSTRUMENTATION_HPP
#define APERIODIC_LAB_INSTRUMENTATION_HPP

// Counters on the exact-comparison layer.  Compiled in when
// APERIODIC_LAB_INSTRUMENT is defined (test builds); otherwise every hook is
// a no-op.
//
// exact_sign_evaluations counts integer sign decisions.  float_in_decision
// counts floating-point conversions that happen while a DecisionScope is
// open; analysis code opens the scope around everything that feeds a verdict
// and closes it before rendering display values.

#include <atomic>
#include <cstdint>

namespace aplab::instrumentation {

#ifdef APERIODIC_LAB_INSTRUMENT
inline constexpr bool enabled = true;
#else
inline constexpr bool enabled = false;
#endif

inline std::atomic<std::uint64_t> exact_sign_evaluations{0};
inline std::atomic<std::uint64_t> float_in_decision{0};
inline std::atomic<int> decision_depth{0};

inline void note_exact_sign() {
    if constexpr (enabled) exact_sign_evaluations.fetch_add(1, std::memory_order_relaxed);
}

inline void note_float_conversion() {
    if constexpr (enabled) {
        if (decision_depth.load(std::memory_order_relaxed) > 0) {
            float_in_decision.fetch_add(1, std::memory_order_relaxed);
        }
    }
}

inline void reset() {
    exact_sign_evaluations = 0;
    float_in_decision = 0;
}

class DecisionScope {
public:
    DecisionScope() { decision_depth.fetch_add(1); }
    ~DecisionScope() { decision_depth.fetch_sub(1); }
    DecisionScope(const DecisionScope&) = delete;
    DecisionScope& operator=(const DecisionScope&) = delete;
};

}  // namespace aplab::instrumentation

#endif  // APERIODIC_LAB_INSTRUMENTATION_HPP

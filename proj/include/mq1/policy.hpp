#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mq1/errors.hpp"

namespace mq1 {

enum class TailKind { FiniteCutoff, EventuallyConstant, General };

struct Tail {
    TailKind kind = TailKind::FiniteCutoff;
    int cutoff = 0;        // FiniteCutoff: first state with zero rate
    double ratio = 0.0;    // EventuallyConstant rate
    int from = 0;          // EventuallyConstant start index

    static Tail finite_cutoff(int q0) { return {TailKind::FiniteCutoff, q0, 0.0, 0}; }
    static Tail eventually_constant(double rho, int from) {
        return {TailKind::EventuallyConstant, 0, rho, from};
    }
    static Tail general() { return {TailKind::General, 0, 0.0, 0}; }
};

enum class FamilyKind {
    Static,
    TwoArrival,
    FullyDynamic,
    TwoSupportThreshold,
    ThroughputThreshold,
    Custom,
};

std::string family_name(FamilyKind k);

// Arrival-rate map q -> lambda(q) with a structural tail descriptor.
// Immutable after construction.
struct Policy {
    std::vector<double> table;  // explicit rates for q = 0..table.size()-1
    Tail tail;
    double lambda_max = 1.0;
    FamilyKind family = FamilyKind::Custom;
    std::map<std::string, double> params;
    // Rates past the table for General tails.
    std::function<double(int)> extension;
    bool uncertified = false;  // General tail declared without a stability certificate

    double rate(int q) const;
};

// lambda == c for all q; c in [0, 1) keeps the chain positive recurrent.
Policy build_static_policy(double c, double lambda_max);

Policy build_custom_policy(std::vector<double> table, Tail tail, double lambda_max,
                           std::function<double(int)> extension = nullptr);

}  // namespace mq1

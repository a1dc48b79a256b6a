#include "mq1/policy.hpp"

#include <cmath>

namespace mq1 {

std::string family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Static: return "static";
        case FamilyKind::TwoArrival: return "two_arrival";
        case FamilyKind::FullyDynamic: return "fully_dynamic";
        case FamilyKind::TwoSupportThreshold: return "two_support_threshold";
        case FamilyKind::ThroughputThreshold: return "throughput_threshold";
        case FamilyKind::Custom: return "custom";
    }
    return "custom";
}

double Policy::rate(int q) const {
    if (q < 0) throw DomainError("negative queue length");
    if (q < static_cast<int>(table.size())) return table[q];
    switch (tail.kind) {
        case TailKind::FiniteCutoff:
            if (q < tail.cutoff)
                throw ConsistencyError("finite-cutoff policy has no rate for state " +
                                       std::to_string(q));
            return 0.0;
        case TailKind::EventuallyConstant:
            return tail.ratio;
        case TailKind::General:
            if (!extension)
                throw ConsistencyError("general-tail policy needs an extension rule");
            return extension(q);
    }
    return 0.0;
}

Policy build_static_policy(double c, double lambda_max) {
    if (c < 0.0) throw DomainError("static rate must be nonnegative");
    if (c > lambda_max) throw DomainError("static rate exceeds lambda_max");
    if (c >= 1.0) throw StabilityError("static rate " + std::to_string(c) +
                                       " >= 1 makes the chain transient or null recurrent");
    Policy p;
    p.tail = Tail::eventually_constant(c, 0);
    p.lambda_max = lambda_max;
    p.family = FamilyKind::Static;
    p.params = {{"c", c}};
    return p;
}

Policy build_custom_policy(std::vector<double> table, Tail tail, double lambda_max,
                           std::function<double(int)> extension) {
    for (size_t q = 0; q < table.size(); ++q) {
        if (!(table[q] >= 0.0) || table[q] > lambda_max + 1e-12)
            throw DomainError("rate at state " + std::to_string(q) + " outside [0, lambda_max]");
    }
    Policy p;
    p.lambda_max = lambda_max;
    p.family = FamilyKind::Custom;
    int len = static_cast<int>(table.size());
    switch (tail.kind) {
        case TailKind::FiniteCutoff: {
            if (tail.cutoff > len)
                throw ConsistencyError("declared cutoff lies beyond the rate table");
            for (int q = 0; q < tail.cutoff; ++q)
                if (table[q] <= 0.0)
                    throw ConsistencyError("zero rate before the declared cutoff");
            for (int q = tail.cutoff; q < len; ++q)
                if (table[q] != 0.0)
                    throw ConsistencyError("nonzero rate at or after the declared cutoff");
            break;
        }
        case TailKind::EventuallyConstant: {
            if (tail.ratio >= 1.0)
                throw StabilityError("eventually-constant rate >= 1 is unstable");
            if (tail.ratio < 0.0 || tail.ratio > lambda_max)
                throw DomainError("tail rate outside [0, lambda_max]");
            if (tail.from > len)
                throw ConsistencyError("tail start lies beyond the rate table");
            for (int q = tail.from; q < len; ++q)
                if (table[q] != tail.ratio)
                    throw ConsistencyError("table disagrees with the declared constant tail");
            break;
        }
        case TailKind::General:
            p.uncertified = true;  // stability certified later, at solve time
            p.extension = std::move(extension);
            break;
    }
    p.table = std::move(table);
    p.tail = tail;
    return p;
}

}  // namespace mq1

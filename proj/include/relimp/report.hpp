#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace relimp {

enum class Measure {
    birnbaum,
    risk_achievement,
    risk_reduction,
    covariance,
    covariance_normalized,
    information,
    l1_covariance,
    linf_covariance,
    natvig,
};

inline const char* measure_name(Measure m) {
    switch (m) {
        case Measure::birnbaum: return "birnbaum";
        case Measure::risk_achievement: return "risk_achievement";
        case Measure::risk_reduction: return "risk_reduction";
        case Measure::covariance: return "covariance";
        case Measure::covariance_normalized: return "covariance_normalized";
        case Measure::information: return "information";
        case Measure::l1_covariance: return "l1_covariance";
        case Measure::linf_covariance: return "linf_covariance";
        case Measure::natvig: return "natvig";
    }
    return "?";
}

/// Component ids sorted by descending value; ties broken by ascending id.
inline std::vector<int> importance_ranking(std::span<const double> values) {
    std::vector<int> ids(values.size());
    std::iota(ids.begin(), ids.end(), 1);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (values[a - 1] != values[b - 1]) return values[a - 1] > values[b - 1];
        return a < b;
    });
    return ids;
}

struct ImportanceReport {
    Measure measure = Measure::birnbaum;
    std::vector<double> values;      // values[i-1] is the importance of component i
    std::vector<int> ranking;        // component ids, most important first
    std::vector<double> maximizers;  // linf only: maximizing time per component

    static ImportanceReport make(Measure m, std::vector<double> values,
                                 std::vector<double> maximizers = {}) {
        ImportanceReport r;
        r.measure = m;
        r.ranking = importance_ranking(values);
        r.values = std::move(values);
        r.maximizers = std::move(maximizers);
        return r;
    }
};

}  // namespace relimp

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ail/link.hpp"
#include "ail/model_class.hpp"

namespace ail {

// Per-round telemetry for the selective sampling drivers.
struct StepRecord {
    long long t = 0;
    ContextId context = 0;
    ActionLabel action = 1;       // played action y_hat
    bool queried = false;         // Z_t
    std::vector<ActionLabel> labels;  // per-expert labels, present iff queried
    double width = 0.0;           // Delta_t (or |Delta vec|_2 for M experts)
    double truth_margin = 0.0;    // diagnostic, margin of the truth at x_t
    int inst_regret = 0;          // 1{y_hat != y} - 1{pi*(x) != y}

    // bandit extras
    double width_w = 0.0;
    int candidates = 0;
    bool xi = false;
};

struct RunLog {
    std::vector<StepRecord> records;
    long long total_regret = 0;   // Reg_T
    long long total_queries = 0;  // N_T
    std::vector<double> eps_grid;
    std::vector<long long> t_eps;  // margin counters on eps_grid
    std::vector<std::string> anomalies;
    bool bandit_columns = false;

    void push(StepRecord rec);

    // Recomputes the totals from the records; throws on mismatch.
    void check_consistency() const;

    // CSV per the fixed schema
    //   t,context,action,queried,label,width,truth_margin,inst_regret,cum_regret,cum_queries
    // plus ,width_w,candidates,xi when bandit_columns is set. Multi-expert
    // labels are joined with ';'. Floats use 17 significant digits.
    std::string to_csv() const;
};

// Per-(t,h) telemetry for episodic imitation learning.
struct ILStepRecord {
    long long t = 0;
    int h = 0;
    ContextId state = 0;
    ActionLabel action = 1;
    bool queried = false;
    std::vector<ActionLabel> labels;
    double width = 0.0;
    double inst_reward = 0.0;
    double comparator_reward = 0.0;
};

struct ILRunLog {
    std::vector<ILStepRecord> records;
    double total_regret = 0.0;  // sum_t R(tau*) - R(tau_t)
    long long total_queries = 0;
    std::vector<double> eps_grid;
    std::vector<std::vector<long long>> t_eps_h;  // [h][eps index], comparator path
    std::vector<std::string> anomalies;

    void check_consistency() const;

    // CSV schema:
    //   t,h,state,action,queried,label,width,inst_reward,comparator_reward,cum_regret,cum_queries
    std::string to_csv() const;
};

std::string format_double(double v);  // 17 significant digits

}  // namespace ail

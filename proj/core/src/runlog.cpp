#include "ail/runlog.hpp"

#include <cmath>
#include <sstream>

#include "ail/errors.hpp"

namespace ail {

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void RunLog::push(StepRecord rec) {
    if (rec.queried != !rec.labels.empty())
        throw InvalidInput("RunLog: labels present iff queried");
    total_regret += rec.inst_regret;
    total_queries += rec.queried ? 1 : 0;
    records.push_back(std::move(rec));
}

void RunLog::check_consistency() const {
    long long reg = 0, q = 0;
    for (const auto& r : records) {
        reg += r.inst_regret;
        q += r.queried ? 1 : 0;
        if (r.width < 0.0 && std::isfinite(r.width))
            throw InvalidInput("RunLog: negative width");
    }
    if (reg != total_regret || q != total_queries)
        throw InvalidInput("RunLog: totals disagree with records");
}

namespace {

std::string join_labels(const std::vector<ActionLabel>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(labels[i]);
    }
    return out;
}

}  // namespace

std::string RunLog::to_csv() const {
    std::ostringstream out;
    out << "t,context,action,queried,label,width,truth_margin,inst_regret,cum_regret,cum_queries";
    if (bandit_columns) out << ",width_w,candidates,xi";
    out << "\n";
    long long reg = 0, q = 0;
    for (const auto& r : records) {
        reg += r.inst_regret;
        q += r.queried ? 1 : 0;
        out << r.t << ',' << r.context << ',' << r.action << ',' << (r.queried ? 1 : 0)
            << ',' << join_labels(r.labels) << ',' << format_double(r.width) << ','
            << format_double(r.truth_margin) << ',' << r.inst_regret << ',' << reg
            << ',' << q;
        if (bandit_columns)
            out << ',' << format_double(r.width_w) << ',' << r.candidates << ','
                << (r.xi ? 1 : 0);
        out << "\n";
    }
    return out.str();
}

void ILRunLog::check_consistency() const {
    long long q = 0;
    for (const auto& r : records) q += r.queried ? 1 : 0;
    if (q != total_queries)
        throw InvalidInput("ILRunLog: query total disagrees with records");
}

std::string ILRunLog::to_csv() const {
    std::ostringstream out;
    out << "t,h,state,action,queried,label,width,inst_reward,comparator_reward,cum_regret,cum_queries\n";
    long long q = 0;
    double reg = 0.0;
    double round_learner = 0.0, round_comp = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        q += r.queried ? 1 : 0;
        round_learner += r.inst_reward;
        round_comp += r.comparator_reward;
        bool round_end = i + 1 == records.size() || records[i + 1].t != r.t;
        if (round_end) {
            reg += round_comp - round_learner;
            round_learner = round_comp = 0.0;
        }
        out << r.t << ',' << r.h << ',' << r.state << ',' << r.action << ','
            << (r.queried ? 1 : 0) << ',' << join_labels(r.labels) << ','
            << format_double(r.width) << ',' << format_double(r.inst_reward) << ','
            << format_double(r.comparator_reward) << ',' << format_double(reg) << ','
            << q << "\n";
    }
    return out.str();
}

}  // namespace ail

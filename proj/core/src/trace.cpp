#include "cfgd/trace.hpp"

#include <cstdio>
#include <ostream>

namespace cfgd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Trace::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta_) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    meta_.emplace_back(key, value);
}

void Trace::set_meta(const std::string& key, double value) { set_meta(key, format_double(value)); }

const std::string* Trace::find_meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key) return &kv.second;
    return nullptr;
}

void Trace::write_csv(std::ostream& os) const {
    const bool star = !records_.empty() && records_.front().dist_to_x_star.has_value();
    const bool tik = !records_.empty() && records_.front().dist_to_x_tik.has_value();
    const bool test = !records_.empty() && records_.front().test_error.has_value();
    const bool bound = !records_.empty() && records_.front().at_bound.has_value();

    os << "iter,objective,stepsize";
    if (star) os << ",dist_to_x_star";
    if (tik) os << ",dist_to_x_tik";
    if (test) os << ",test_error";
    if (bound) os << ",at_bound";
    os << "\n";

    for (const TraceRecord& r : records_) {
        os << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.stepsize);
        if (star) os << ',' << format_double(r.dist_to_x_star.value_or(0.0));
        if (tik) os << ',' << format_double(r.dist_to_x_tik.value_or(0.0));
        if (test) os << ',' << format_double(r.test_error.value_or(0.0));
        if (bound) os << ',' << format_double(r.at_bound.value_or(0.0));
        os << "\n";
    }
}

void Trace::write_metadata(std::ostream& os) const {
    for (const auto& kv : meta_) os << kv.first << '=' << kv.second << "\n";
}

} // namespace cfgd

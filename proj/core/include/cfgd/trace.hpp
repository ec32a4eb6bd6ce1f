#ifndef CFGD_TRACE_HPP
#define CFGD_TRACE_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfgd/linalg.hpp"

namespace cfgd {

/// Serialize a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// One optimizer iteration. stepsize is the step taken to leave this iterate
/// (zero on the final record).
struct TraceRecord {
    std::size_t iter = 0;
    Vector x;
    double objective = 0.0;
    double stepsize = 0.0;
    std::optional<double> dist_to_x_star;
    std::optional<double> dist_to_x_tik;
    std::optional<double> test_error;
    std::optional<double> at_bound;
};

/// Full run record: one TraceRecord per iterate (count = iterations + 1) plus
/// flat key/value metadata. CSV output is deterministic byte-for-byte given
/// identical runs.
class Trace {
public:
    std::vector<TraceRecord>& records() { return records_; }
    const std::vector<TraceRecord>& records() const { return records_; }

    void set_meta(const std::string& key, const std::string& value);
    void set_meta(const std::string& key, double value);
    const std::string* find_meta(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

    bool finished_finite() const { return finished_finite_; }
    void mark_non_finite() { finished_finite_ = false; }

    /// Columns: iter,objective,stepsize plus whichever optional columns are
    /// present in the first record. Header always emitted.
    void write_csv(std::ostream& os) const;

    /// key=value lines, one per metadata entry, insertion order.
    void write_metadata(std::ostream& os) const;

private:
    std::vector<TraceRecord> records_;
    std::vector<std::pair<std::string, std::string>> meta_;
    bool finished_finite_ = true;
};

} // namespace cfgd

#endif

#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "postsel/errors.hpp"

namespace postsel {

/// A finite Hilbert space declared as an ordered tensor product of factors,
/// each factor an ordered list of mode labels. Flat indices are row-major
/// with the first factor slowest. Mode labels must be unique across the whole
/// space, which keeps composite labels and marginal lookups unambiguous.
class Space {
public:
    Space() = default;

    explicit Space(std::vector<std::vector<std::string>> factors)
        : factors_(std::move(factors)) {
        if (factors_.empty())
            fail(Errc::SpaceMismatch, "space needs at least one factor");
        std::unordered_set<std::string> seen;
        for (const auto& f : factors_) {
            if (f.empty())
                fail(Errc::SpaceMismatch, "factor needs at least one mode");
            for (const auto& m : f) {
                if (m.empty() || m.find(',') != std::string::npos)
                    fail(Errc::SpaceMismatch, "bad mode label '" + m + "'");
                if (!seen.insert(m).second)
                    fail(Errc::SpaceMismatch, "duplicate mode label '" + m + "'");
            }
        }
    }

    static Space single(std::vector<std::string> modes) {
        return Space({std::move(modes)});
    }

    int dim() const {
        int d = 1;
        for (const auto& f : factors_) d *= static_cast<int>(f.size());
        return d;
    }

    int factor_count() const { return static_cast<int>(factors_.size()); }

    const std::vector<std::string>& factor(int i) const { return factors_.at(i); }

    const std::vector<std::vector<std::string>>& factors() const { return factors_; }

    /// Per-factor mode labels of the flat basis index.
    std::vector<std::string> label_parts(int flat) const {
        check_index(flat);
        std::vector<std::string> parts(factors_.size());
        for (int i = factor_count() - 1; i >= 0; --i) {
            int n = static_cast<int>(factors_[i].size());
            parts[i] = factors_[i][flat % n];
            flat /= n;
        }
        return parts;
    }

    /// Composite label, factors joined with ','.
    std::string label(int flat) const {
        auto parts = label_parts(flat);
        std::string out = parts[0];
        for (size_t i = 1; i < parts.size(); ++i) out += "," + parts[i];
        return out;
    }

    int index_of(const std::vector<std::string>& parts) const {
        if (static_cast<int>(parts.size()) != factor_count())
            fail(Errc::SpaceMismatch, "label has wrong number of factors");
        int flat = 0;
        for (int i = 0; i < factor_count(); ++i) {
            const auto& modes = factors_[i];
            int pos = -1;
            for (int j = 0; j < static_cast<int>(modes.size()); ++j)
                if (modes[j] == parts[i]) { pos = j; break; }
            if (pos < 0)
                fail(Errc::NotFound, "no mode '" + parts[i] + "' in factor " + std::to_string(i));
            flat = flat * static_cast<int>(modes.size()) + pos;
        }
        return flat;
    }

    /// Accepts either a single-factor mode label or a comma-joined composite.
    int index_of_label(const std::string& composite) const {
        std::vector<std::string> parts;
        size_t start = 0;
        while (true) {
            size_t comma = composite.find(',', start);
            if (comma == std::string::npos) {
                parts.push_back(composite.substr(start));
                break;
            }
            parts.push_back(composite.substr(start, comma - start));
            start = comma + 1;
        }
        return index_of(parts);
    }

    /// Locates a single mode label within one factor; returns {factor, pos}.
    std::pair<int, int> locate_mode(const std::string& mode) const {
        for (int i = 0; i < factor_count(); ++i)
            for (int j = 0; j < static_cast<int>(factors_[i].size()); ++j)
                if (factors_[i][j] == mode) return {i, j};
        fail(Errc::NotFound, "no mode '" + mode + "' in space");
    }

    bool operator==(const Space& other) const = default;

    bool disjoint_from(const Space& other) const {
        for (const auto& f : factors_)
            for (const auto& m : f)
                for (const auto& g : other.factors_)
                    for (const auto& n : g)
                        if (m == n) return false;
        return true;
    }

    Space tensor_with(const Space& other) const {
        if (!disjoint_from(other))
            fail(Errc::SpaceMismatch, "tensor factors share mode labels");
        auto fs = factors_;
        fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
        return Space(std::move(fs));
    }

private:
    void check_index(int flat) const {
        if (flat < 0 || flat >= dim())
            fail(Errc::SpaceMismatch, "basis index " + std::to_string(flat) + " out of range");
    }

    std::vector<std::vector<std::string>> factors_;
};

}  // namespace postsel

#pragma once

#include <ostream>
#include <span>

#include "postsel/counting.hpp"
#include "postsel/pointer.hpp"

namespace postsel {

// CSV formats are fixed: documented headers, 12 significant digits, '\n'
// line ends. Golden-file tests pin them.

/// Columns: setting, T, analytic_p, counts, trials, seed.
/// With `loss_column`, an extra trailing column loss = 1 - T is appended
/// (T = 1 always means no loss here; the extra column is for plots whose
/// x axis is the loss).
inline void write_loss_csv(std::ostream& out, const CountSeries& s, bool loss_column = false) {
    out << "setting,T,analytic_p,counts,trials,seed";
    if (loss_column) out << ",loss";
    out << "\n";
    for (size_t i = 0; i < s.parameter.size(); ++i) {
        out << s.setting << "," << fmt_g12(s.parameter[i]) << "," << fmt_g12(s.analytic_p[i])
            << "," << s.counts[i] << "," << s.trials << "," << s.seed;
        if (loss_column) out << "," << fmt_g12(1.0 - s.parameter[i]);
        out << "\n";
    }
}

/// Columns: G, P_plus, R.
inline void write_pointer_csv(std::ostream& out, std::span<const PointerSample> samples) {
    out << "G,P_plus,R\n";
    for (const auto& s : samples)
        out << fmt_g12(s.G) << "," << fmt_g12(s.P_plus) << "," << fmt_g12(s.R) << "\n";
}

}  // namespace postsel

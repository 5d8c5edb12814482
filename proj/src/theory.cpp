#include "mimolab/theory.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "mimolab/errors.hpp"

namespace mimolab {

namespace {

void check_antennas(std::size_t m, std::size_t n, const char* who) {
  if (n < 1 || m < n) {
    std::ostringstream msg;
    msg << who << ": need m >= n >= 1 (m=" << m << ", n=" << n << ")";
    throw ConfigError(msg.str());
  }
}

std::string format_threshold_note(double rth) {
  std::ostringstream os;
  os << "error floor above R_th=" << rth << " b/s/Hz";
  return os.str();
}

}  // namespace

double rate_threshold(std::size_t n) {
  if (n < 1) {
    throw ConfigError("rate_threshold: n must be >= 1");
  }
  if (n == 1) {
    return std::numeric_limits<double>::infinity();
  }
  const double nd = static_cast<double>(n);
  return nd * std::log2(nd / (nd - 1.0));
}

std::size_t strong_stream_count(std::size_t n, double rate) {
  const double nd = static_cast<double>(n);
  const double raw = std::ceil(nd * std::exp2(-rate / nd));
  const double clamped = std::min(std::max(raw, 1.0), nd);
  return static_cast<std::size_t>(clamped);
}

DiversityPrediction predicted_diversity(std::size_t m, std::size_t n,
                                        double rate,
                                        const PrecoderConfig& precoder,
                                        EqualizerKind equalizer) {
  check_antennas(m, n, "predicted_diversity");
  if (!(rate >= 0.0)) {
    throw ConfigError("predicted_diversity: rate must be >= 0");
  }
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double bare_zf = md - nd + 1.0;

  switch (precoder.kind) {
    case PrecoderKind::kZfMinPower:
    case PrecoderKind::kZfMaxThroughput:
      if (equalizer != EqualizerKind::kNone) {
        throw ConfigError(
            "predicted_diversity: no prediction for zero-forcing precoding "
            "with an equalizer");
      }
      return {bare_zf, ""};

    case PrecoderKind::kRzf:
    case PrecoderKind::kMf: {
      const double rth = rate_threshold(n);
      switch (equalizer) {
        case EqualizerKind::kNone:
          if (rate < rth) {
            return {md * nd, ""};
          }
          if (rate == rth) {
            return {0.0, "boundary rate R == R_th: floor regime assumed"};
          }
          return {0.0, format_threshold_note(rth)};
        case EqualizerKind::kZf:
          return {0.5 * bare_zf, "fractional: ZF equalizer halves the order"};
        case EqualizerKind::kMmse: {
          if (rate <= rth) {
            return {md * nd, ""};
          }
          const double l = static_cast<double>(strong_stream_count(n, rate));
          return {0.5 * (l * l + (md - nd) * l), format_threshold_note(rth)};
        }
      }
      break;
    }

    case PrecoderKind::kWiener:
      switch (equalizer) {
        case EqualizerKind::kNone:
        case EqualizerKind::kMmse: {
          // MMSE equalization leaves the MSE-optimal precoder's order intact
          const double l = static_cast<double>(strong_stream_count(n, rate));
          return {l * l + (md - nd) * l, ""};
        }
        case EqualizerKind::kZf:
          return {bare_zf, "ZF equalizer drops the order to the ZF level"};
      }
      break;
  }
  throw ConfigError("predicted_diversity: unsupported configuration");
}

double dmt_curve(std::size_t m, std::size_t n, PrecoderKind precoder,
                 double r) {
  check_antennas(m, n, "dmt_curve");
  if (!(r >= 0.0) || r > static_cast<double>(n)) {
    throw ConfigError("dmt_curve: multiplexing gain must be in [0, n]");
  }
  switch (precoder) {
    case PrecoderKind::kZfMinPower:
    case PrecoderKind::kZfMaxThroughput:
    case PrecoderKind::kWiener: {
      const double slope = 1.0 - r / static_cast<double>(n);
      return (static_cast<double>(m - n) + 1.0) * std::max(slope, 0.0);
    }
    case PrecoderKind::kRzf:
    case PrecoderKind::kMf:
      return 0.0;  // error floor for every positive multiplexing gain
  }
  throw ConfigError("dmt_curve: unknown precoder");
}

std::vector<DiversityTableRow> diversity_table(std::size_t m, std::size_t n,
                                               const std::vector<double>& rates,
                                               double rzf_c) {
  check_antennas(m, n, "diversity_table");
  struct Cell {
    PrecoderConfig pre;
    EqualizerKind eq;
  };
  std::vector<Cell> cells = {
      {{PrecoderKind::kZfMinPower, 0.0}, EqualizerKind::kNone},
      {{PrecoderKind::kZfMaxThroughput, 0.0}, EqualizerKind::kNone},
      {{PrecoderKind::kRzf, rzf_c}, EqualizerKind::kNone},
      {{PrecoderKind::kRzf, rzf_c}, EqualizerKind::kZf},
      {{PrecoderKind::kRzf, rzf_c}, EqualizerKind::kMmse},
      {{PrecoderKind::kMf, 0.0}, EqualizerKind::kNone},
      {{PrecoderKind::kMf, 0.0}, EqualizerKind::kZf},
      {{PrecoderKind::kMf, 0.0}, EqualizerKind::kMmse},
      {{PrecoderKind::kWiener, 0.0}, EqualizerKind::kNone},
      {{PrecoderKind::kWiener, 0.0}, EqualizerKind::kZf},
      {{PrecoderKind::kWiener, 0.0}, EqualizerKind::kMmse},
  };
  std::vector<DiversityTableRow> rows;
  for (const double rate : rates) {
    for (const auto& cell : cells) {
      const DiversityPrediction p =
          predicted_diversity(m, n, rate, cell.pre, cell.eq);
      DiversityTableRow row;
      row.precoder = precoder_name(cell.pre.kind);
      row.equalizer = equalizer_name(cell.eq);
      row.m = m;
      row.n = n;
      row.rate = rate;
      row.d_predicted = p.value;
      row.regime_note = p.regime_note;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_diversity_table_csv(std::ostream& os,
                               const std::vector<DiversityTableRow>& rows) {
  os << "precoder,equalizer,M,N,R,d_predicted,regime_note\n";
  char buf[64];
  for (const auto& r : rows) {
    os << r.precoder << ',' << r.equalizer << ',' << r.m << ',' << r.n << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.rate);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.d_predicted);
    os << buf << ',' << r.regime_note << '\n';
  }
}

}  // namespace mimolab

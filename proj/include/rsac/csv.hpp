// Copyright 2026 The rsac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSAC_CSV_HPP
#define RSAC_CSV_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsac/bench.hpp"
#include "rsac/trainer.hpp"

namespace rsac {

/// Doubles are written with max_digits10 so the CSV round-trips exactly.
inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics csv: " + path);
  out << "step,seed,validation_return,actor_loss,critic_loss,alpha,beta,wall_time_s\n";
  for (const auto& r : rows)
    out << r.step << ',' << r.seed << ',' << csv_number(r.validation_return) << ','
        << csv_number(r.actor_loss) << ',' << csv_number(r.critic_loss) << ','
        << csv_number(r.alpha) << ',' << csv_number(r.beta) << ','
        << csv_number(r.wall_time_s) << '\n';
}

inline std::string metrics_csv_string(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "step,seed,validation_return,actor_loss,critic_loss,alpha,beta,wall_time_s\n";
  for (const auto& r : rows)
    out << r.step << ',' << r.seed << ',' << csv_number(r.validation_return) << ','
        << csv_number(r.actor_loss) << ',' << csv_number(r.critic_loss) << ','
        << csv_number(r.alpha) << ',' << csv_number(r.beta) << ','
        << csv_number(r.wall_time_s) << '\n';
  return out.str();
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                            const std::string& upper_bound_hash = "") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results csv: " + path);
  if (!upper_bound_hash.empty()) out << "# upper_bound_table_hash=" << upper_bound_hash << "\n";
  out << "sweep_axis,value,distribution,mean_return,gain_vs_greedy_pct,relative_gain,"
         "seed_set,data_seed_set,error\n";
  for (const auto& r : rows)
    out << r.sweep_axis << ',' << r.value << ',' << r.distribution << ','
        << csv_number(r.mean_return) << ',' << csv_number(r.gain_pct) << ','
        << csv_number(r.rel_gain) << ',' << r.seed_set << ',' << r.data_seed_set << ','
        << r.error << '\n';
}

}  // namespace rsac

#endif  // RSAC_CSV_HPP

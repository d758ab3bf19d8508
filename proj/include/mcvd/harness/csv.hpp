/*
   Copyright 2026 The mcvd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcvd/errors.hpp"
#include "mcvd/harness/sweep.hpp"

namespace mcvd::harness {

inline constexpr const char* csv_header =
    "scheme,receiver,Ts_s,L,Q,t1_s,t2_s,tu_s,n1,n2,nu,threshold,pe_analytic,pe_mc,trials,ci95";

/// Flat CSV view of a row. Absorbing rows carry n1 = n2 = nu = -1; passive
/// rows carry the sample indices and their times n t_s. No reuse gives
/// tu_s = 0 and nu = -1.
struct CsvRecord {
    std::string scheme;
    std::string receiver;
    double Ts_s = 0.0;
    int L = 0;
    double Q = 0.0;
    double t1_s = 0.0;
    double t2_s = 0.0;
    double tu_s = 0.0;
    long long n1 = -1;
    long long n2 = -1;
    long long nu = -1;
    double threshold = 0.0;
    double pe_analytic = 0.0;
    double pe_mc = 0.0;
    unsigned long long trials = 0;
    double ci95 = 0.0;
};

inline CsvRecord to_record(const SweepRow& row)
{
    CsvRecord r;
    r.scheme = std::string(to_string(row.scheme));
    r.receiver = std::string(to_string(row.receiver));
    r.Ts_s = row.symbol_time;
    r.L = row.isi_length;
    r.Q = row.ber.q;
    if (const auto* tw = std::get_if<TimeWindow>(&row.window)) {
        r.t1_s = tw->t1;
        r.t2_s = tw->t2;
        r.tu_s = reuse_time(row.reuse);
    } else {
        const auto& sw = std::get<SampleWindow>(row.window);
        r.n1 = sw.n1;
        r.n2 = sw.n2;
        r.nu = reuse_samples(row.reuse);
        r.t1_s = sw.n1 * row.sample_interval;
        r.t2_s = sw.n2 * row.sample_interval;
        r.tu_s = r.nu >= 0 ? static_cast<double>(r.nu) * row.sample_interval : 0.0;
    }
    r.threshold = row.ber.threshold;
    r.pe_analytic = row.ber.analytic_pe;
    r.pe_mc = row.ber.empirical_pe;
    r.trials = row.ber.trials;
    r.ci95 = row.ber.ci95;
    return r;
}

/// 17 significant digits; round-trips every double.
inline std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_record(const CsvRecord& r)
{
    std::ostringstream o;
    o << r.scheme << ',' << r.receiver << ',' << format_double(r.Ts_s) << ',' << r.L << ',' << format_double(r.Q)
      << ',' << format_double(r.t1_s) << ',' << format_double(r.t2_s) << ',' << format_double(r.tu_s) << ','
      << r.n1 << ',' << r.n2 << ',' << r.nu << ',' << format_double(r.threshold) << ','
      << format_double(r.pe_analytic) << ',' << format_double(r.pe_mc) << ',' << r.trials << ','
      << format_double(r.ci95);
    return o.str();
}

inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& out)
{
    if (rows.empty())
        throw ArgumentError("write_csv needs at least one row");
    out << csv_header << '\n';
    for (const auto& row : rows)
        out << format_record(to_record(row)) << '\n';
    if (!out)
        throw IoError("failed writing CSV");
}

inline std::vector<CsvRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw IoError("CSV header mismatch");
    std::vector<CsvRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 16)
            throw IoError("CSV row has " + std::to_string(f.size()) + " fields: " + line);
        try {
            CsvRecord r;
            r.scheme = f[0];
            r.receiver = f[1];
            r.Ts_s = std::stod(f[2]);
            r.L = std::stoi(f[3]);
            r.Q = std::stod(f[4]);
            r.t1_s = std::stod(f[5]);
            r.t2_s = std::stod(f[6]);
            r.tu_s = std::stod(f[7]);
            r.n1 = std::stoll(f[8]);
            r.n2 = std::stoll(f[9]);
            r.nu = std::stoll(f[10]);
            r.threshold = std::stod(f[11]);
            r.pe_analytic = std::stod(f[12]);
            r.pe_mc = std::stod(f[13]);
            r.trials = std::stoull(f[14]);
            r.ci95 = std::stod(f[15]);
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw IoError("malformed CSV row: " + line);
        }
    }
    return out;
}

/// One block per scheme, blocks separated by two blank lines:
/// Q analytic_pe empirical_pe ci95.
inline void emit_plotdata(const std::vector<SweepRow>& rows, std::ostream& out)
{
    if (rows.empty())
        throw ArgumentError("emit_plotdata needs at least one row");
    std::string current;
    bool first = true;
    for (const auto& row : rows) {
        const std::string name(to_string(row.scheme));
        if (first || name != current) {
            if (!first)
                out << "\n\n";
            out << "# scheme " << name << "\n# Q analytic_pe empirical_pe ci95\n";
            current = name;
            first = false;
        }
        out << format_double(row.ber.q) << ' ' << format_double(row.ber.analytic_pe) << ' '
            << format_double(row.ber.empirical_pe) << ' ' << format_double(row.ber.ci95) << '\n';
    }
    if (!out)
        throw IoError("failed writing plot data");
}

} // namespace mcvd::harness

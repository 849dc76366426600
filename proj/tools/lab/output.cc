// Copyright 2026 The selfcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lab/output.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace selfcorr::lab {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

void OutputDir::write(const std::string &name, std::string_view content) {
    write_file_atomic(dir_ / name, content);
    OutputFile f{name, content.size(), sha256_hex(content)};
    auto it = std::find_if(files_.begin(), files_.end(), [&](const OutputFile &g) { return g.name == name; });
    if (it != files_.end()) {
        *it = f;
    } else {
        files_.push_back(f);
    }
}

void OutputDir::write_json(const std::string &name, const json &value) {
    write(name, value.dump(2) + "\n");
}

void OutputDir::write_jsonl(const std::string &name, const std::vector<json> &records) {
    std::string s;
    for (const auto &r : records) {
        s += r.dump();
        s += '\n';
    }
    write(name, s);
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable &CsvTable::row(std::vector<std::string> values) {
    if (values.size() != header_.size()) {
        throw std::logic_error("csv row width does not match header");
    }
    rows_.push_back(std::move(values));
    return *this;
}

std::string CsvTable::str() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string> &v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << (i ? "," : "") << v[i];
        }
        out << "\n";
    };
    line(header_);
    for (const auto &r : rows_) line(r);
    return out.str();
}

std::string success_curves_svg(const std::string &title, const std::vector<CurveSeries> &series) {
    const double W = 720, H = 440, left = 60, right = 170, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    double tmin = INFINITY, tmax = -INFINITY;
    for (const auto &s : series) {
        for (double t : s.times) {
            if (t > 0) {
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
            }
        }
    }
    if (!(tmin < tmax)) {
        tmin = 1;
        tmax = 10;
    }
    const double lmin = std::log10(tmin), lmax = std::log10(tmax);
    auto X = [&](double t) { return left + (std::log10(t) - lmin) / (lmax - lmin) * pw; };
    auto Y = [&](double p) { return top + (1 - p) * ph; };
    static const char *colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">" << title << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(lmin)); d <= static_cast<int>(std::floor(lmax)); ++d) {
        double x = X(std::pow(10.0, d));
        o << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << d
          << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        double p = k / 4.0;
        o << "<text x=\"" << left - 8 << "\" y=\"" << Y(p) + 4 << "\" text-anchor=\"end\">" << p
          << "</text>\n";
    }
    o << "<line x1=\"" << left << "\" y1=\"" << Y(2.0 / 3) << "\" x2=\"" << left + pw << "\" y2=\""
      << Y(2.0 / 3) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">time</text>\n";
    o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
      << ")\" text-anchor=\"middle\">success probability</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto &s = series[i];
        const char *c = colours[i % 10];
        std::ostringstream band, line;
        for (std::size_t j = 0; j < s.times.size(); ++j) {
            if (s.times[j] <= 0) continue;
            line << (line.tellp() > 0 ? " " : "") << X(s.times[j]) << "," << Y(s.p_hat[j]);
        }
        for (std::size_t j = 0; j < s.times.size(); ++j) {
            if (s.times[j] <= 0) continue;
            band << X(s.times[j]) << "," << Y(s.hi[j]) << " ";
        }
        for (std::size_t j = s.times.size(); j-- > 0;) {
            if (s.times[j] <= 0) continue;
            band << X(s.times[j]) << "," << Y(s.lo[j]) << " ";
        }
        o << "<polygon points=\"" << band.str() << "\" fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        o << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
        double ly = top + 14 + 16 * static_cast<double>(i);
        o << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30
          << "\" y2=\"" << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>";
        o << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace selfcorr::lab

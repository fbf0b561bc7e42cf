#include "saext/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace saext::io {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const GridFunction& f) {
    out << "x,re,im,w\n";
    const auto xs = f.xs();
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_double(xs[i]) << ',' << format_double(f[i].real()) << ','
            << format_double(f[i].imag()) << ',' << format_double(f.weight()(xs[i])) << '\n';
    }
}

namespace {

double parse_double(const std::string& field) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error(Errc::invalid_argument, "malformed number in CSV", field);
    }
    return v;
}

MeasureWeight infer_weight(const std::vector<double>& xs, const std::vector<double>& ws) {
    for (auto candidate : {MeasureWeight::unit(), MeasureWeight::radial(),
                           MeasureWeight::radial_squared()}) {
        bool ok = true;
        for (std::size_t i = 0; i < xs.size() && ok; ++i) {
            ok = std::abs(candidate(xs[i]) - ws[i]) <= 1e-12 * std::max(1.0, std::abs(ws[i]));
        }
        if (ok) return candidate;
    }
    throw Error(Errc::invalid_argument, "weight column matches no catalog weight", "read_csv");
}

}  // namespace

GridFunction read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "x,re,im,w") {
        throw Error(Errc::invalid_argument, "expected CSV header x,re,im,w", "read_csv");
    }
    std::vector<double> xs;
    std::vector<double> ws;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        double fields[4];
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(row, cell, ',')) {
                throw Error(Errc::invalid_argument, "CSV row needs four columns", line);
            }
            fields[k] = parse_double(cell);
        }
        xs.push_back(fields[0]);
        values.emplace_back(fields[1], fields[2]);
        ws.push_back(fields[3]);
    }
    const MeasureWeight weight = xs.size() >= 2 ? infer_weight(xs, ws) : MeasureWeight::unit();
    return GridFunction(std::move(xs), std::move(values), weight);
}

nlohmann::json to_json(const GridFunction& f) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const cplx& v : f.values()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return {{"xs", std::vector<double>(f.xs().begin(), f.xs().end())},
            {"re", std::move(re)},
            {"im", std::move(im)},
            {"weight", std::string(f.weight().id())}};
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
    try {
        const auto xs = j.at("xs").get<std::vector<double>>();
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != xs.size() || im.size() != xs.size()) {
            throw Error(Errc::grid_mismatch, "xs, re and im differ in length",
                        "grid_function_from_json");
        }
        std::vector<cplx> values(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) values[i] = {re[i], im[i]};
        const auto weight = MeasureWeight::from_id(j.value("weight", std::string("1")));
        return GridFunction(xs, std::move(values), weight);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_argument, e.what(), "grid_function_from_json");
    }
}

}  // namespace saext::io

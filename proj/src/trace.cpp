#include "stlf/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stlf {

bool SignalSpace::has_channel(const std::string& name) const {
    return std::find(output_channels.begin(), output_channels.end(), name) !=
               output_channels.end() ||
           std::find(input_channels.begin(), input_channels.end(), name) !=
               input_channels.end();
}

bool SignalSpace::has_parameter(const std::string& name) const {
    return std::find(parameter_names.begin(), parameter_names.end(), name) !=
           parameter_names.end();
}

std::vector<std::string> SignalSpace::sample_channels() const {
    std::vector<std::string> all = output_channels;
    all.insert(all.end(), input_channels.begin(), input_channels.end());
    return all;
}

void SignalSpace::validate() const {
    std::set<std::string> seen;
    auto check = [&](const std::vector<std::string>& group) {
        for (const auto& n : group)
            if (!seen.insert(n).second)
                throw Error("signal space: duplicate name '" + n + "'");
    };
    check(output_channels);
    check(input_channels);
    check(parameter_names);
}

Trace::Trace(SignalSpace space, std::vector<Sample> samples,
             std::map<std::string, double> params, double duration)
    : space_(std::move(space)), params_(std::move(params)), duration_(duration) {
    space_.validate();
    channel_order_ = space_.sample_channels();
    for (std::size_t c = 0; c < channel_order_.size(); ++c)
        channel_index_[channel_order_[c]] = c;
    columns_.resize(channel_order_.size());
    times_.reserve(samples.size());
    for (auto& col : columns_) col.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.values.size() != channel_order_.size())
            throw Error("trace sample does not cover exactly the output+input channels");
        times_.push_back(s.time);
        for (std::size_t c = 0; c < channel_order_.size(); ++c) {
            auto it = s.values.find(channel_order_[c]);
            if (it == s.values.end())
                throw Error("trace sample missing channel '" + channel_order_[c] + "'");
            columns_[c].push_back(it->second);
        }
    }
}

Trace::Trace(SignalSpace space, std::vector<double> times,
             std::vector<std::vector<double>> columns,
             std::map<std::string, double> params, double duration)
    : space_(std::move(space)),
      times_(std::move(times)),
      columns_(std::move(columns)),
      params_(std::move(params)),
      duration_(duration) {
    space_.validate();
    channel_order_ = space_.sample_channels();
    if (columns_.size() != channel_order_.size())
        throw Error("trace column count does not match the signal space");
    for (const auto& col : columns_)
        if (col.size() != times_.size())
            throw Error("trace column length does not match the time base");
    for (std::size_t c = 0; c < channel_order_.size(); ++c)
        channel_index_[channel_order_[c]] = c;
}

Sample Trace::sample(std::size_t i) const {
    Sample s;
    s.time = times_.at(i);
    for (std::size_t c = 0; c < channel_order_.size(); ++c)
        s.values[channel_order_[c]] = columns_[c][i];
    return s;
}

const std::vector<double>* Trace::column(const std::string& name) const {
    auto it = channel_index_.find(name);
    return it == channel_index_.end() ? nullptr : &columns_[it->second];
}

std::optional<double> Trace::parameter(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) return std::nullopt;
    return it->second;
}

ValidationReport validate_trace(const Trace& tr) {
    ValidationReport report;
    const auto& t = tr.times();
    if (t.empty()) {
        report.violations.push_back({TraceViolation::Kind::Empty, 0, "trace has no samples"});
        return report;
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i - 1] < t[i])) {
            std::ostringstream msg;
            msg << "timestamps not strictly increasing at index " << i << " (" << t[i - 1]
                << " -> " << t[i] << ")";
            report.violations.push_back({TraceViolation::Kind::Monotonicity, i, msg.str()});
        }
    }
    constexpr double kDurationTol = 1e-9;
    if (std::fabs(t.back() - tr.duration()) > kDurationTol) {
        std::ostringstream msg;
        msg << "last timestamp " << t.back() << " does not equal duration " << tr.duration();
        report.violations.push_back(
            {TraceViolation::Kind::DurationMismatch, t.size() - 1, msg.str()});
    }
    return report;
}

// ── file format ─────────────────────────────────────────────────────────────

namespace {

std::string num17(double v) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

nlohmann::json space_to_json(const SignalSpace& s) {
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto& [name, k] : s.channel_kinds)
        kinds[name] = (k == ChannelKind::Boolean) ? "boolean" : "real";
    return {{"output_channels", s.output_channels},
            {"input_channels", s.input_channels},
            {"parameter_names", s.parameter_names},
            {"channel_kinds", kinds}};
}

SignalSpace space_from_json(const nlohmann::json& j) {
    SignalSpace s;
    s.output_channels = j.at("output_channels").get<std::vector<std::string>>();
    s.input_channels = j.at("input_channels").get<std::vector<std::string>>();
    s.parameter_names = j.at("parameter_names").get<std::vector<std::string>>();
    if (j.contains("channel_kinds"))
        for (const auto& [name, k] : j.at("channel_kinds").items())
            s.channel_kinds[name] =
                (k.get<std::string>() == "boolean") ? ChannelKind::Boolean : ChannelKind::Real;
    return s;
}

}  // namespace

std::string default_meta_path(const std::string& csv_path) {
    std::string base = csv_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    return base + ".meta.json";
}

void write_trace_csv(const Trace& tr, const std::string& csv_path,
                     const std::string& meta_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot open '" + csv_path + "' for writing");
    auto channels = tr.space().sample_channels();
    csv << "time";
    for (const auto& c : channels) csv << "," << c;
    csv << "\n";
    for (std::size_t i = 0; i < tr.sample_count(); ++i) {
        csv << num17(tr.time_at(i));
        for (const auto& c : channels) csv << "," << num17((*tr.column(c))[i]);
        csv << "\n";
    }
    if (!csv.flush()) throw Error("failed writing '" + csv_path + "'");

    nlohmann::json meta = {{"space", space_to_json(tr.space())},
                           {"params", tr.params()},
                           {"duration", tr.duration()}};
    std::ofstream mf(meta_path);
    if (!mf) throw Error("cannot open '" + meta_path + "' for writing");
    mf << meta.dump(2) << "\n";
    if (!mf.flush()) throw Error("failed writing '" + meta_path + "'");
}

Trace read_trace_csv(const std::string& csv_path, const std::string& meta_path) {
    std::ifstream mf(meta_path);
    if (!mf) throw Error("cannot open trace metadata '" + meta_path + "'");
    nlohmann::json meta;
    try {
        mf >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid trace metadata '" + meta_path + "': " + e.what());
    }
    SignalSpace space = space_from_json(meta.at("space"));
    std::map<std::string, double> params;
    if (meta.contains("params"))
        params = meta.at("params").get<std::map<std::string, double>>();
    double duration = meta.at("duration").get<double>();

    std::ifstream csv(csv_path);
    if (!csv) throw Error("cannot open trace '" + csv_path + "'");
    std::string line;
    if (!std::getline(csv, line)) throw Error("trace '" + csv_path + "' is empty");

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = s.find(',', start);
            if (pos == std::string::npos) {
                out.push_back(s.substr(start));
                break;
            }
            out.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return out;
    };

    auto header = split(line);
    auto expected = space.sample_channels();
    if (header.empty() || header.front() != "time")
        throw Error("trace '" + csv_path + "': first column must be 'time'");
    if (header.size() != expected.size() + 1)
        throw Error("trace '" + csv_path + "': header does not match the signal space");
    for (std::size_t c = 0; c < expected.size(); ++c)
        if (header[c + 1] != expected[c])
            throw Error("trace '" + csv_path + "': column '" + header[c + 1] +
                        "' does not match expected channel '" + expected[c] + "'");

    std::vector<double> times;
    std::vector<std::vector<double>> columns(expected.size());
    std::size_t row = 1;
    while (std::getline(csv, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != header.size())
            throw Error("trace '" + csv_path + "' row " + std::to_string(row) +
                        ": expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        char* end = nullptr;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string& fld = fields[c];
            double v = std::strtod(fld.c_str(), &end);
            if (end == fld.c_str() || *end != '\0')
                throw Error("trace '" + csv_path + "' row " + std::to_string(row) +
                            ": bad numeric field '" + fld + "'");
            if (c == 0)
                times.push_back(v);
            else
                columns[c - 1].push_back(v);
        }
    }
    return Trace(std::move(space), std::move(times), std::move(columns), std::move(params),
                 duration);
}

}  // namespace stlf

#include "banditnav/trace.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

namespace banditnav {

using nlohmann::json;

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : Error("trace line " + std::to_string(line) + ": " + what), line_(line) {}

std::string encode_trace_record(const TraceRecord& record) {
    return json{{"step", record.step}, {"scores", record.sample.scores}}.dump();
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
    for (const auto& r : records) out << encode_trace_record(r) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            TraceRecord r;
            r.step = j.at("step").get<std::uint64_t>();
            r.sample.scores = j.at("scores").get<std::vector<double>>();
            r.sample.validate();
            records.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw TraceParseError(number, e.what());
        }
    }
    return records;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file '" + path + "'");
    return read_trace(in);
}

ReplaySource::ReplaySource(std::vector<TraceRecord> records) : records_(std::move(records)) {}

ScoreSample ReplaySource::next(const ViewContext& /*view*/) {
    if (cursor_ >= records_.size()) {
        throw TraceExhaustedError("trace exhausted after " + std::to_string(records_.size()) +
                                  " records");
    }
    return records_[cursor_++].sample;
}

ScoreSample RecordingSource::next(const ViewContext& view) {
    ScoreSample s = inner_->next(view);
    records_.push_back({view.step, s});
    return s;
}

}  // namespace banditnav

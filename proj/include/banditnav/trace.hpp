#pragma once
// Score traces: one JSON record per line, {"step":u64,"scores":[float...]}.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "banditnav/sensor.hpp"

namespace banditnav {

struct TraceRecord {
    std::uint64_t step = 0;
    ScoreSample sample;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class TraceParseError : public Error {
public:
    TraceParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class TraceExhaustedError : public Error {
public:
    using Error::Error;
};

std::string encode_trace_record(const TraceRecord& record);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);

/// Parses a whole trace. Blank lines are skipped; line numbers are 1-based.
std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> read_trace_file(const std::string& path);

/// Yields recorded samples in order, ignoring the view.
class ReplaySource final : public ScoreSource {
public:
    explicit ReplaySource(std::vector<TraceRecord> records);
    ScoreSample next(const ViewContext& view) override;
    std::size_t remaining() const { return records_.size() - cursor_; }

private:
    std::vector<TraceRecord> records_;
    std::size_t cursor_ = 0;
};

/// Forwards to another source and keeps every sample it returned.
class RecordingSource final : public ScoreSource {
public:
    explicit RecordingSource(ScoreSource& inner) : inner_(&inner) {}
    ScoreSample next(const ViewContext& view) override;
    const std::vector<TraceRecord>& records() const { return records_; }

private:
    ScoreSource* inner_;
    std::vector<TraceRecord> records_;
};

}  // namespace banditnav

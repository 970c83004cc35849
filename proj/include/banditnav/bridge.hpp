#pragma once
// Client side of the live relevance bridge. Records are single-line JSON
// objects terminated by '\n', exchanged strictly one at a time:
//
//   request : {"id":u64,"target":str,"prompts":[str...],
//              "view":{"pose":[x,y,heading],"episode":u64,"step":u64,"image_path":str?}}
//   response: {"id":u64,"scores":[float...]}   or   {"id":u64,"error":str}

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/sensor.hpp"

namespace banditnav {

enum class BridgeErrorKind {
    transport,        // connect/read/write failure or peer closed
    malformed,        // response is not a valid record
    id_mismatch,      // response id differs from the outstanding request
    count_violation,  // number of scores differs from number of prompts
    range_violation,  // a score lies outside [-1, 1]
    remote,           // server answered with an error record
};

std::string_view to_string(BridgeErrorKind kind);

class BridgeError : public Error {
public:
    BridgeError(BridgeErrorKind kind, const std::string& what);
    BridgeErrorKind kind() const { return kind_; }

private:
    BridgeErrorKind kind_;
};

struct BridgeRequest {
    std::uint64_t id = 0;
    std::string target;
    std::vector<std::string> prompts;
    Pose pose{};
    std::uint64_t episode = 0;
    std::uint64_t step = 0;
    std::optional<std::string> image_path;
};

std::string encode_request(const BridgeRequest& request);
/// Server-side parse; throws BridgeError(malformed).
BridgeRequest decode_request(std::string_view line);

std::string encode_response(std::uint64_t id, const std::vector<double>& scores);
std::string encode_error(std::uint64_t id, std::string_view message);

/// Validates one response line against the outstanding request.
ScoreSample decode_response(std::string_view line, std::uint64_t expected_id,
                            std::size_t expected_count);

/// A bidirectional newline-delimited channel. Lines exclude the terminator.
class LineTransport {
public:
    virtual ~LineTransport() = default;
    virtual void send_line(std::string_view line) = 0;
    virtual std::string receive_line() = 0;
};

struct Endpoint {
    enum class Kind { tcp, stdio } kind = Kind::tcp;
    std::string host;
    std::uint16_t port = 0;
    std::string command;  // stdio: shell command whose stdin/stdout carry the protocol
};

/// Accepts `tcp://host:port`, `host:port` or `stdio:<command>`.
Endpoint parse_endpoint(std::string_view text);

/// Name of the environment variable that overrides the configured endpoint.
inline constexpr const char* kSensorEndpointEnv = "BANDITNAV_SENSOR_ENDPOINT";

std::unique_ptr<LineTransport> connect_tcp(const std::string& host, std::uint16_t port);
std::unique_ptr<LineTransport> spawn_stdio(const std::string& command);
std::unique_ptr<LineTransport> open_transport(const Endpoint& endpoint);

/// Sequential request/response client: one request outstanding at a time.
class BridgeClient {
public:
    explicit BridgeClient(std::unique_ptr<LineTransport> transport);

    /// Assigns the next id, sends, and validates the reply.
    ScoreSample request(BridgeRequest request);

private:
    std::unique_ptr<LineTransport> transport_;
    std::uint64_t next_id_ = 1;
};

/// Sends one request over `client` and returns the validated scores.
ScoreSample observe_bridge(BridgeClient& client, const BridgeRequest& request);

class BridgeSource final : public ScoreSource {
public:
    explicit BridgeSource(std::unique_ptr<BridgeClient> client);
    ScoreSample next(const ViewContext& view) override;

private:
    std::unique_ptr<BridgeClient> client_;
};

}  // namespace banditnav

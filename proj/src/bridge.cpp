#include "banditnav/bridge.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <json.hpp>

namespace banditnav {

using nlohmann::json;

std::string_view to_string(BridgeErrorKind kind) {
    switch (kind) {
        case BridgeErrorKind::transport: return "transport";
        case BridgeErrorKind::malformed: return "malformed";
        case BridgeErrorKind::id_mismatch: return "id_mismatch";
        case BridgeErrorKind::count_violation: return "count_violation";
        case BridgeErrorKind::range_violation: return "range_violation";
        case BridgeErrorKind::remote: return "remote";
    }
    return "unknown";
}

BridgeError::BridgeError(BridgeErrorKind kind, const std::string& what)
    : Error("bridge " + std::string(to_string(kind)) + ": " + what), kind_(kind) {}

std::string encode_request(const BridgeRequest& r) {
    json view = {{"pose", {r.pose.position.x, r.pose.position.y, r.pose.heading}},
                 {"episode", r.episode},
                 {"step", r.step}};
    if (r.image_path) view["image_path"] = *r.image_path;
    json j = {{"id", r.id}, {"target", r.target}, {"prompts", r.prompts}, {"view", view}};
    return j.dump();
}

BridgeRequest decode_request(std::string_view line) {
    try {
        const json j = json::parse(line);
        BridgeRequest r;
        r.id = j.at("id").get<std::uint64_t>();
        r.target = j.at("target").get<std::string>();
        r.prompts = j.at("prompts").get<std::vector<std::string>>();
        const json& view = j.at("view");
        const auto pose = view.at("pose").get<std::vector<double>>();
        if (pose.size() != 3) throw BridgeError(BridgeErrorKind::malformed, "pose needs 3 values");
        r.pose = {{pose[0], pose[1]}, pose[2]};
        r.episode = view.at("episode").get<std::uint64_t>();
        r.step = view.at("step").get<std::uint64_t>();
        if (view.contains("image_path") && !view["image_path"].is_null()) {
            r.image_path = view["image_path"].get<std::string>();
        }
        return r;
    } catch (const BridgeError&) {
        throw;
    } catch (const std::exception& e) {
        throw BridgeError(BridgeErrorKind::malformed, e.what());
    }
}

std::string encode_response(std::uint64_t id, const std::vector<double>& scores) {
    return json{{"id", id}, {"scores", scores}}.dump();
}

std::string encode_error(std::uint64_t id, std::string_view message) {
    return json{{"id", id}, {"error", message}}.dump();
}

ScoreSample decode_response(std::string_view line, std::uint64_t expected_id,
                            std::size_t expected_count) {
    json j;
    try {
        j = json::parse(line);
    } catch (const std::exception& e) {
        throw BridgeError(BridgeErrorKind::malformed, e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_unsigned()) {
        throw BridgeError(BridgeErrorKind::malformed, "response lacks an unsigned id");
    }
    const auto id = j["id"].get<std::uint64_t>();
    if (id != expected_id) {
        throw BridgeError(BridgeErrorKind::id_mismatch, "expected id " + std::to_string(expected_id) +
                                                            ", got " + std::to_string(id));
    }
    if (j.contains("error")) {
        throw BridgeError(BridgeErrorKind::remote,
                          j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump());
    }
    if (!j.contains("scores") || !j["scores"].is_array()) {
        throw BridgeError(BridgeErrorKind::malformed, "response lacks a scores array");
    }
    ScoreSample sample;
    for (const json& s : j["scores"]) {
        if (!s.is_number()) throw BridgeError(BridgeErrorKind::malformed, "non-numeric score");
        sample.scores.push_back(s.get<double>());
    }
    if (sample.scores.size() != expected_count) {
        throw BridgeError(BridgeErrorKind::count_violation,
                          "expected " + std::to_string(expected_count) + " scores, got " +
                              std::to_string(sample.scores.size()));
    }
    for (double s : sample.scores) {
        if (!(s >= -1.0 && s <= 1.0)) {
            throw BridgeError(BridgeErrorKind::range_violation,
                              "score " + std::to_string(s) + " outside [-1, 1]");
        }
    }
    return sample;
}

namespace {

/// Newline-delimited channel over a connected socket.
class SocketLineTransport final : public LineTransport {
public:
    explicit SocketLineTransport(int fd, pid_t child = -1) : fd_(fd), child_(child) {}
    SocketLineTransport(const SocketLineTransport&) = delete;
    SocketLineTransport& operator=(const SocketLineTransport&) = delete;
    ~SocketLineTransport() override {
        ::close(fd_);
        if (child_ > 0) {
            int status = 0;
            ::waitpid(child_, &status, 0);
        }
    }

    void send_line(std::string_view line) override {
        std::string buf(line);
        buf.push_back('\n');
        std::size_t sent = 0;
        while (sent < buf.size()) {
            const ssize_t n = ::send(fd_, buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw BridgeError(BridgeErrorKind::transport, std::strerror(errno));
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    std::string receive_line() override {
        while (true) {
            const std::size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            char chunk[4096];
            const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw BridgeError(BridgeErrorKind::transport, std::strerror(errno));
            }
            if (n == 0) throw BridgeError(BridgeErrorKind::transport, "peer closed the connection");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    int fd_;
    pid_t child_;
    std::string buffer_;
};

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
    Endpoint ep;
    if (text.starts_with("stdio:")) {
        ep.kind = Endpoint::Kind::stdio;
        ep.command = std::string(text.substr(6));
        if (ep.command.empty()) throw Error("endpoint: stdio endpoint needs a command");
        return ep;
    }
    if (text.starts_with("tcp://")) text.remove_prefix(6);
    const std::size_t colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw Error("endpoint: expected host:port, got '" + std::string(text) + "'");
    }
    ep.host = std::string(text.substr(0, colon));
    const std::string_view port = text.substr(colon + 1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc{} || ptr != port.data() + port.size() || value == 0 || value > 65535) {
        throw Error("endpoint: invalid port '" + std::string(port) + "'");
    }
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
}

std::unique_ptr<LineTransport> connect_tcp(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        throw BridgeError(BridgeErrorKind::transport, std::string("resolve: ") + gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* p = res; p; p = p->ai_next) {
        fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        throw BridgeError(BridgeErrorKind::transport,
                          "cannot connect to " + host + ":" + service);
    }
    return std::make_unique<SocketLineTransport>(fd);
}

std::unique_ptr<LineTransport> spawn_stdio(const std::string& command) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
        throw BridgeError(BridgeErrorKind::transport, std::strerror(errno));
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw BridgeError(BridgeErrorKind::transport, std::strerror(errno));
    }
    if (pid == 0) {
        ::close(fds[0]);
        ::dup2(fds[1], STDIN_FILENO);
        ::dup2(fds[1], STDOUT_FILENO);
        ::close(fds[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(fds[1]);
    return std::make_unique<SocketLineTransport>(fds[0], pid);
}

std::unique_ptr<LineTransport> open_transport(const Endpoint& endpoint) {
    if (endpoint.kind == Endpoint::Kind::stdio) return spawn_stdio(endpoint.command);
    return connect_tcp(endpoint.host, endpoint.port);
}

BridgeClient::BridgeClient(std::unique_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {
    if (!transport_) throw Error("BridgeClient: null transport");
}

ScoreSample BridgeClient::request(BridgeRequest request) {
    if (request.prompts.empty()) throw Error("BridgeClient: request without prompts");
    request.id = next_id_++;
    transport_->send_line(encode_request(request));
    return decode_response(transport_->receive_line(), request.id, request.prompts.size());
}

ScoreSample observe_bridge(BridgeClient& client, const BridgeRequest& request) {
    return client.request(request);
}

BridgeSource::BridgeSource(std::unique_ptr<BridgeClient> client) : client_(std::move(client)) {}

ScoreSample BridgeSource::next(const ViewContext& view) {
    BridgeRequest r;
    r.target = std::string(view.target);
    r.prompts.assign(view.prompts.begin(), view.prompts.end());
    r.pose = view.pose;
    r.episode = view.episode;
    r.step = view.step;
    r.image_path = view.image_path;
    return client_->request(std::move(r));
}

}  // namespace banditnav

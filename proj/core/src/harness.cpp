// SPDX-License-Identifier: Apache-2.0
#include "bellsim/harness.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "bellsim/angle.hpp"
#include "bellsim/counter_rng.hpp"
#include "bellsim/format.hpp"
#include "bellsim/wire.hpp"

namespace bellsim {
namespace {

struct Socket {
    int fd = -1;
    Socket() = default;
    explicit Socket(int f) : fd(f) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& o) noexcept : fd(o.fd) { o.fd = -1; }
    Socket& operator=(Socket&& o) noexcept {
        if (this != &o) {
            close_fd();
            fd = o.fd;
            o.fd = -1;
        }
        return *this;
    }
    ~Socket() { close_fd(); }
    void close_fd() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
    bool valid() const { return fd >= 0; }
};

void wait_readable(int fd, int timeout_ms, const char* what) {
    pollfd p{fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, timeout_ms);
    if (rc == 0) throw protocol_error(std::string(what) + ": timed out");
    if (rc < 0) throw protocol_error(std::string(what) + ": poll failed: " + std::strerror(errno));
}

void write_all(int fd, const std::string& bytes) {
    std::size_t off = 0;
    while (off < bytes.size()) {
        const ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw protocol_error(std::string("send failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

void read_exact(int fd, char* buf, std::size_t len, int timeout_ms, const char* what) {
    std::size_t off = 0;
    while (off < len) {
        wait_readable(fd, timeout_ms, what);
        const ssize_t n = ::recv(fd, buf + off, len - off, 0);
        if (n == 0) throw protocol_error(std::string(what) + ": connection closed");
        if (n < 0) {
            if (errno == EINTR) continue;
            throw protocol_error(std::string(what) + ": recv failed: " + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

WireMessage read_frame(int fd, int timeout_ms, const char* what) {
    char hdr[4];
    read_exact(fd, hdr, 4, timeout_ms, what);
    const std::uint32_t n = (static_cast<std::uint32_t>(static_cast<unsigned char>(hdr[0])) << 24) |
                            (static_cast<std::uint32_t>(static_cast<unsigned char>(hdr[1])) << 16) |
                            (static_cast<std::uint32_t>(static_cast<unsigned char>(hdr[2])) << 8) |
                            static_cast<std::uint32_t>(static_cast<unsigned char>(hdr[3]));
    if (n == 0 || n > kMaxFrameBytes) {
        throw protocol_error(std::string(what) + ": bad frame length " + std::to_string(n));
    }
    std::string body(n, '\0');
    read_exact(fd, body.data(), n, timeout_ms, what);
    return parse_message(body);
}

void send_message(int fd, const WireMessage& m) { write_all(fd, encode_frame(m)); }

sockaddr_in make_addr(const std::string& host, int port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw std::runtime_error("bad IPv4 address '" + host + "'");
    }
    return addr;
}

}  // namespace

HarnessResult referee_run(const SessionConfig& cfg) {
    if (cfg.rounds < 1) throw std::invalid_argument("harness: rounds must be >= 1");
    const auto ctx = ModelContext::make(make_family(cfg.family_spec), cfg.theta);

    Socket listener(::socket(AF_INET, SOCK_STREAM, 0));
    if (!listener.valid()) throw std::runtime_error("socket() failed");
    const int one = 1;
    ::setsockopt(listener.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = make_addr(cfg.listen_host, cfg.listen_port);
    if (::bind(listener.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw std::runtime_error("bind failed: " + std::string(std::strerror(errno)));
    }
    if (::listen(listener.fd, 2) != 0) throw std::runtime_error("listen failed");

    socklen_t alen = sizeof(addr);
    ::getsockname(listener.fd, reinterpret_cast<sockaddr*>(&addr), &alen);
    const int bound_port = ntohs(addr.sin_port);
    if (cfg.on_listening) cfg.on_listening(cfg.listen_host, bound_port);

    // Accept both detectors; HELLO announces which role a connection is.
    Socket det_a, det_b;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.accept_timeout_ms);
    while (!det_a.valid() || !det_b.valid()) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                              deadline - std::chrono::steady_clock::now())
                              .count();
        if (left <= 0) {
            throw std::runtime_error("harness startup: detectors not connected before timeout (" +
                                     std::string(det_a.valid() || det_b.valid() ? "1" : "0") +
                                     " of 2 joined)");
        }
        pollfd p{listener.fd, POLLIN, 0};
        const int rc = ::poll(&p, 1, static_cast<int>(left));
        if (rc <= 0) continue;
        Socket conn(::accept(listener.fd, nullptr, nullptr));
        if (!conn.valid()) continue;
        ::setsockopt(conn.fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        const WireMessage hello = read_frame(conn.fd, cfg.io_timeout_ms, "referee awaiting HELLO");
        if (hello.type != MessageType::Hello) {
            throw protocol_error("expected HELLO, got " + std::string(to_string(hello.type)));
        }
        if (hello.role == "detector-a" && !det_a.valid()) {
            det_a = std::move(conn);
        } else if (hello.role == "detector-b" && !det_b.valid()) {
            det_b = std::move(conn);
        } else {
            throw protocol_error("unexpected HELLO role '" + hello.role + "'");
        }
    }

    for (auto* d : {&det_a, &det_b}) {
        WireMessage config;
        config.type = MessageType::Config;
        config.round_id = 0;
        config.role = (d == &det_a) ? "detector-a" : "detector-b";
        config.family = ctx.family.spec();
        send_message(d->fd, config);
    }

    std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;
    std::uint64_t completed = 0;
    HarnessResult result;

    const auto collect_outcome = [&](int fd, std::uint64_t round, const char* who) {
        const WireMessage m = read_frame(fd, cfg.io_timeout_ms, who);
        if (m.type != MessageType::Outcome || m.round_id != round) {
            throw protocol_error(std::string(who) + ": expected OUTCOME for round " +
                                 std::to_string(round) + ", got " + to_string(m.type) +
                                 " round " + std::to_string(m.round_id));
        }
        if (m.s != 1 && m.s != -1) {
            throw protocol_error(std::string(who) + ": outcome s=" + std::to_string(m.s) +
                                 " outside {-1, +1} in frame " + encode_message(m));
        }
        return m.s;
    };

    try {
        for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
            const double u = uniform_unit(cfg.seed, r);
            const double lambda_a = sample_lambda(ctx.family, u);
            const double lambda_b = transform(ctx, lambda_a);

            WireMessage assign;
            assign.type = MessageType::Assign;
            assign.round_id = r;
            assign.lambda = lambda_a;
            send_message(det_a.fd, assign);
            assign.lambda = lambda_b;
            send_message(det_b.fd, assign);

            const int s_a = collect_outcome(det_a.fd, r, "detector-a");
            const int s_b = collect_outcome(det_b.fd, r, "detector-b");
            if (s_a > 0) {
                (s_b > 0 ? n_pp : n_pm)++;
            } else {
                (s_b > 0 ? n_mp : n_mm)++;
            }
            ++completed;
        }
        WireMessage done;
        done.type = MessageType::Done;
        done.round_id = cfg.rounds;
        send_message(det_a.fd, done);
        send_message(det_b.fd, done);
    } catch (const protocol_error& e) {
        result.aborted = true;
        result.error = e.what();
    }

    result.completed_rounds = completed;
    const std::uint64_t denom = result.aborted ? std::max<std::uint64_t>(completed, 1) : cfg.rounds;
    result.summary = finalize_summary(denom, cfg.seed, ctx.theta, n_pp, n_pm, n_mp, n_mm);
    return result;
}

DetectorResult detector_run(const SessionConfig& cfg) {
    DetectorResult result;
    if (cfg.role != "detector-a" && cfg.role != "detector-b") {
        throw std::invalid_argument("detector_run: role must be detector-a or detector-b");
    }

    Socket sock;
    const sockaddr_in addr = make_addr(cfg.connect_host, cfg.connect_port);
    // The referee may still be binding; retry briefly.
    for (int attempt = 0;; ++attempt) {
        sock = Socket(::socket(AF_INET, SOCK_STREAM, 0));
        if (!sock.valid()) throw std::runtime_error("socket() failed");
        if (::connect(sock.fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) break;
        sock.close_fd();
        if (attempt >= 50) {
            result.status = 2;
            result.error = "connect to referee failed: " + std::string(std::strerror(errno));
            return result;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(40));
    }
    const int one = 1;
    ::setsockopt(sock.fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

    try {
        WireMessage hello;
        hello.type = MessageType::Hello;
        hello.role = cfg.role;
        send_message(sock.fd, hello);

        const WireMessage config = read_frame(sock.fd, cfg.io_timeout_ms, "detector awaiting CONFIG");
        if (config.type != MessageType::Config || config.role != cfg.role) {
            throw protocol_error("bad CONFIG for " + cfg.role + ": " + encode_message(config));
        }

        std::uint64_t last_round = 0;
        bool first = true;
        for (;;) {
            const WireMessage m = read_frame(sock.fd, cfg.io_timeout_ms, "detector awaiting ASSIGN");
            if (m.type == MessageType::Done) break;
            if (m.type != MessageType::Assign) {
                throw protocol_error("expected ASSIGN/DONE, got " + encode_message(m));
            }
            if (!first && m.round_id <= last_round) {
                throw protocol_error("round_id not increasing in frame " + encode_message(m));
            }
            if (!(m.lambda >= -kPi && m.lambda < kPi)) {
                throw protocol_error("non-canonical lambda " + format_sig(m.lambda, 17) +
                                     " in frame " + encode_message(m));
            }
            first = false;
            last_round = m.round_id;

            WireMessage outcome;
            outcome.type = MessageType::Outcome;
            outcome.round_id = m.round_id;
            outcome.s = response(m.lambda);
            send_message(sock.fd, outcome);
            ++result.rounds_served;
        }
    } catch (const protocol_error& e) {
        result.status = 1;
        result.error = e.what();
    }
    return result;
}

}  // namespace bellsim

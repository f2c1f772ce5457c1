#include "reasontrans/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace reasontrans {

namespace {

// Exit code the child uses when execvp itself fails; chosen to match the
// shell's convention for "command not found".
constexpr int kExecFailed = 127;

void append_capped(std::string& sink, const char* data, ssize_t n, std::size_t cap, bool* truncated) {
    if (sink.size() >= cap) {
        *truncated = true;
        return;
    }
    const std::size_t room = cap - sink.size();
    if (static_cast<std::size_t>(n) > room) {
        sink.append(data, room);
        *truncated = true;
    } else {
        sink.append(data, static_cast<std::size_t>(n));
    }
}

}  // namespace

bool executable_on_path(const std::string& name) {
    if (name.find('/') != std::string::npos) {
        return ::access(name.c_str(), X_OK) == 0;
    }
    const char* path = std::getenv("PATH");
    if (path == nullptr) {
        return false;
    }
    std::string dirs = path;
    std::size_t start = 0;
    while (start <= dirs.size()) {
        std::size_t end = dirs.find(':', start);
        if (end == std::string::npos) {
            end = dirs.size();
        }
        std::string dir = dirs.substr(start, end - start);
        if (dir.empty()) {
            dir = ".";
        }
        if (::access((dir + "/" + name).c_str(), X_OK) == 0) {
            return true;
        }
        start = end + 1;
    }
    return false;
}

RunResult run_process(const std::vector<std::string>& argv, const std::string& workdir,
                      double timeout_s, std::size_t max_output_bytes) {
    RunResult result;
    if (argv.empty()) {
        result.spawn_failed = true;
        result.error_output = "empty argv";
        return result;
    }

    int out_pipe[2];
    int err_pipe[2];
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
        result.spawn_failed = true;
        result.error_output = std::string("pipe: ") + std::strerror(errno);
        return result;
    }

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        result.spawn_failed = true;
        result.error_output = std::string("fork: ") + std::strerror(errno);
        ::close(out_pipe[0]); ::close(out_pipe[1]);
        ::close(err_pipe[0]); ::close(err_pipe[1]);
        return result;
    }

    if (pid == 0) {
        // Child: only async-signal-safe calls until exec.
        ::setpgid(0, 0);
        if (!workdir.empty() && ::chdir(workdir.c_str()) != 0) {
            ::_exit(kExecFailed);
        }
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        for (int fd = 3; fd < 1024; ++fd) {
            ::close(fd);
        }
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) {
            cargv.push_back(const_cast<char*>(a.c_str()));
        }
        cargv.push_back(nullptr);
        ::execvp(cargv[0], cargv.data());
        ::_exit(kExecFailed);
    }

    // Parent
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    bool out_open = true;
    bool err_open = true;
    char buf[4096];
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(timeout_s));

    auto drain = [&](int fd, std::string& sink, bool* open_flag) {
        while (true) {
            const ssize_t n = ::read(fd, buf, sizeof(buf));
            if (n > 0) {
                append_capped(sink, buf, n, max_output_bytes, &result.output_truncated);
            } else if (n == 0) {
                *open_flag = false;
                return;
            } else {
                if (errno == EAGAIN || errno == EWOULDBLOCK) {
                    return;
                }
                *open_flag = false;
                return;
            }
        }
    };

    bool killed = false;
    while (out_open || err_open) {
        const auto now = std::chrono::steady_clock::now();
        if (!killed && now >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            killed = true;
            result.timed_out = true;
        }
        int wait_ms = 50;
        if (!killed) {
            const auto remain =
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
            wait_ms = static_cast<int>(std::min<long long>(std::max<long long>(remain, 1), 50));
        }
        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) {
            fds[nfds++] = {out_pipe[0], POLLIN, 0};
        }
        if (err_open) {
            fds[nfds++] = {err_pipe[0], POLLIN, 0};
        }
        const int rc = ::poll(fds, nfds, wait_ms);
        if (rc > 0) {
            for (nfds_t i = 0; i < nfds; ++i) {
                if ((fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) {
                    continue;
                }
                if (fds[i].fd == out_pipe[0]) {
                    drain(out_pipe[0], result.output, &out_open);
                } else {
                    drain(err_pipe[0], result.error_output, &err_open);
                }
            }
        } else if (rc < 0 && errno != EINTR) {
            break;
        }
    }
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (result.timed_out) {
        // Best effort: reap any stragglers in the group.
        ::kill(-pid, SIGKILL);
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    result.spawn_failed = result.exit_code == kExecFailed;
    result.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace reasontrans

#include "novelty/workspace.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace novelty {

namespace fs = std::filesystem;

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
    if (root_.empty()) throw std::invalid_argument("workspace root is empty");
}

fs::path Workspace::embedding_path(int model_year, ComponentTag component) const {
    return embeddings_dir() / embedding_file_name(model_year, component);
}

fs::path Workspace::scores_path(int year) const {
    return scores_dir() / ("scores_" + std::to_string(year) + ".csv");
}

fs::path Workspace::report_path(std::string_view file_name) const {
    fs::path name(file_name);
    if (name.has_parent_path() || name.is_absolute()) throw std::invalid_argument("report name must be a bare file name");
    return reports_dir() / name;
}

void Workspace::create_directories() const {
    for (const auto& dir : {corpus_dir(), embeddings_dir(), scores_dir(), reports_dir()}) fs::create_directories(dir);
}

fs::path config_sidecar_path(const fs::path& output) {
    fs::path p = output;
    p += ".config.json";
    return p;
}

void atomic_write(const fs::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot rename into " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WorkspaceLock::WorkspaceLock(const fs::path& root) {
    fs::create_directories(root);
    const fs::path lock = root / ".novelty.lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot open lock file " + lock.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("workspace " + root.string() + " is locked by another process");
    }
}

WorkspaceLock::~WorkspaceLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

WorkspaceEmbeddings::WorkspaceEmbeddings(Workspace workspace) : workspace_(std::move(workspace)) {}

const EmbeddingMatrix* WorkspaceEmbeddings::find(int model_year, ComponentTag component) const {
    auto key = std::pair{model_year, component};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second.get();

    const fs::path path = workspace_.embedding_path(model_year, component);
    std::unique_ptr<EmbeddingMatrix> loaded;
    if (fs::exists(path)) {
        loaded = std::make_unique<EmbeddingMatrix>(load_embeddings(path));
        if (loaded->model_year() != model_year || loaded->component() != component)
            throw std::runtime_error(path.string() + ": header does not match its file name");
    }
    return (cache_[key] = std::move(loaded)).get();
}

} // namespace novelty

#pragma once

#include "novelty/component.hpp"
#include "novelty/landscape.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace novelty {

// Directory layout under a workspace root:
//   corpus/proposals.jsonl
//   embeddings/<model_year>_<component>.emb
//   scores/scores_<year>.csv
//   reports/
class Workspace {
public:
    explicit Workspace(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path corpus_dir() const { return root_ / "corpus"; }
    std::filesystem::path embeddings_dir() const { return root_ / "embeddings"; }
    std::filesystem::path scores_dir() const { return root_ / "scores"; }
    std::filesystem::path reports_dir() const { return root_ / "reports"; }

    std::filesystem::path corpus_path() const { return corpus_dir() / "proposals.jsonl"; }
    std::filesystem::path embedding_path(int model_year, ComponentTag component) const;
    std::filesystem::path scores_path(int year) const;
    std::filesystem::path report_path(std::string_view file_name) const;

    void create_directories() const;

private:
    std::filesystem::path root_;
};

// "<file>.config.json"
std::filesystem::path config_sidecar_path(const std::filesystem::path& output);

// Writes to a temporary sibling and renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Advisory exclusive lock on "<root>/.novelty.lock", released on destruction.
// Throws std::runtime_error if another process holds it.
class WorkspaceLock {
public:
    explicit WorkspaceLock(const std::filesystem::path& root);
    ~WorkspaceLock();
    WorkspaceLock(const WorkspaceLock&) = delete;
    WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
    int fd_ = -1;
};

// Loads EMB1 files from the workspace on first use and caches them.
// Not thread-safe.
class WorkspaceEmbeddings final : public EmbeddingProvider {
public:
    explicit WorkspaceEmbeddings(Workspace workspace);
    const EmbeddingMatrix* find(int model_year, ComponentTag component) const override;

private:
    Workspace workspace_;
    mutable std::map<std::pair<int, ComponentTag>, std::unique_ptr<EmbeddingMatrix>> cache_;
};

} // namespace novelty

#include "vodsim/core.hpp"

#include "vodsim/errors.hpp"

namespace vodsim {

void VideoSpec::validate() const {
  if (piece_count < 1) throw ConfigError("video.piece_count must be >= 1");
  if (piece_size_bytes == 0) throw ConfigError("video.piece_size_bytes must be > 0");
  if (!(bitrate_bps > 0.0)) throw ConfigError("video.bitrate_bps must be > 0");
}

void ContentMap::add(NodeId node, PieceId piece) {
  holdings_[node].insert(piece);
}

bool ContentMap::has_piece(NodeId node, PieceId piece) const {
  auto it = holdings_.find(node);
  if (it == holdings_.end()) return false;
  return it->second.count(piece) > 0;
}

bool ContentMap::source_has_piece(const PieceSource& src, PieceId piece) const {
  if (src.is_server()) return true;  // the server is a seeder
  return has_piece(src.peer, piece);
}

std::size_t ContentMap::count(NodeId node) const {
  auto it = holdings_.find(node);
  return it == holdings_.end() ? 0 : it->second.size();
}

const std::set<PieceId>* ContentMap::holdings(NodeId node) const {
  auto it = holdings_.find(node);
  return it == holdings_.end() ? nullptr : &it->second;
}

const std::vector<NeighborRecord>& ConnectivityMap::neighbors_of(NodeId node) const {
  static const std::vector<NeighborRecord> empty;
  auto it = view.find(node);
  return it == view.end() ? empty : it->second;
}

}  // namespace vodsim

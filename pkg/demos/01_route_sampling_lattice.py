"""Chunk a route into the ~20 m sampling lattice and inspect the view angles.

Every leg of a street polyline is split into equal chunks no longer than
the target length. Each chunk contributes two street-view sample points at
its mid-location: one looking left of the heading, one looking right.
"""

from streetpatterns.geo import GeoPoint, Polyline, chunk_polyline, sample_points

# an L-shaped street: ~100 m east, then ~60 m north
street = Polyline(
    [
        GeoPoint(41.0000, -82.0000),
        GeoPoint(41.0000, -81.9988),
        GeoPoint(41.00054, -81.9988),
    ]
)

print(f"street length: {street.length_m():.1f} m")

chunks = chunk_polyline(street, target_len_m=20.0)
print(f"chunks: {len(chunks)}")
for chunk in chunks:
    print(
        f"  #{chunk.index}  {chunk.length_m:5.2f} m  heading {chunk.heading_deg:6.2f} deg"
        f"  mid ({chunk.mid.lat:.6f}, {chunk.mid.lon:.6f})"
    )

samples = sample_points(chunks)
print(f"\nsample points: {len(samples)} (two per chunk, left before right)")
for sp in samples[:6]:
    print(f"  chunk {sp.chunk_index}  {sp.side.name:5s}  view angle {sp.view_angle_deg:6.2f} deg")
print("  ...")

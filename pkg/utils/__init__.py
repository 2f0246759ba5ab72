# Shared infrastructure: exceptions and cache helpers.

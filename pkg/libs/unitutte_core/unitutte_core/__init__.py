"""unitutte core - minors systems, monoid rings and universal Tutte characters."""

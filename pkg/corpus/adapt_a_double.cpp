/* The component is the double implementation; nothing to adapt. */
